#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace latpin {

/// Shortest round-trip decimal representation (std::to_chars), deterministic
/// and locale-independent.
std::string format_double(double v);

/// Tabular artifact with a metadata block. CSV form: '# key: value' comment
/// lines, then the header row, then RFC-4180 quoted data rows. The JSON
/// mirror carries the same metadata, columns and rows.
class TableWriter {
 public:
  using Cell = std::variant<double, long long, std::string>;

  void add_meta(const std::string& key, const std::string& value);
  void add_meta(const std::string& key, double value);
  void add_meta(const std::string& key, long long value);
  void set_columns(std::vector<std::string> cols);
  void add_row(std::vector<Cell> row);

  void write_csv(std::ostream& os, bool with_metadata = true) const;
  void write_json(std::ostream& os) const;

  const std::vector<std::vector<Cell>>& rows() const { return rows_; }

 private:
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// FNV-1a 64-bit, used for config hashes embedded in output metadata.
std::uint64_t fnv1a(const std::string& data);

}  // namespace latpin
