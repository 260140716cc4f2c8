#include "latpin/csv.hpp"

#include <charconv>
#include <cmath>

#include "latpin/errors.hpp"

namespace latpin {

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\n\r") != std::string::npos;
}

std::string csv_escape(const std::string& s) {
  if (!needs_quoting(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::string json_escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += "\"";
  return out;
}

std::string cell_to_csv(const TableWriter::Cell& c) {
  if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
  if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
  return csv_escape(std::get<std::string>(c));
}

std::string cell_to_json(const TableWriter::Cell& c) {
  if (std::holds_alternative<double>(c)) {
    const double v = std::get<double>(c);
    if (std::isnan(v) || std::isinf(v)) return "null";
    return format_double(v);
  }
  if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
  return json_escape(std::get<std::string>(c));
}

}  // namespace

void TableWriter::add_meta(const std::string& key, const std::string& value) {
  meta_.emplace_back(key, value);
}
void TableWriter::add_meta(const std::string& key, double value) {
  meta_.emplace_back(key, format_double(value));
}
void TableWriter::add_meta(const std::string& key, long long value) {
  meta_.emplace_back(key, std::to_string(value));
}

void TableWriter::set_columns(std::vector<std::string> cols) {
  columns_ = std::move(cols);
}

void TableWriter::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    fail(ErrorCode::Config, "row width does not match the column schema");
  }
  rows_.push_back(std::move(row));
}

void TableWriter::write_csv(std::ostream& os, bool with_metadata) const {
  if (with_metadata) {
    for (const auto& [k, v] : meta_) os << "# " << k << ": " << v << "\n";
  }
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    os << (i ? "," : "") << csv_escape(columns_[i]);
  }
  os << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "") << cell_to_csv(row[i]);
    }
    os << "\n";
  }
}

void TableWriter::write_json(std::ostream& os) const {
  os << "{\n  \"metadata\": {";
  for (std::size_t i = 0; i < meta_.size(); ++i) {
    os << (i ? ",\n    " : "\n    ") << json_escape(meta_[i].first) << ": "
       << json_escape(meta_[i].second);
  }
  os << "\n  },\n  \"columns\": [";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    os << (i ? ", " : "") << json_escape(columns_[i]);
  }
  os << "],\n  \"rows\": [";
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    os << (r ? ",\n    " : "\n    ") << "[";
    for (std::size_t i = 0; i < rows_[r].size(); ++i) {
      os << (i ? ", " : "") << cell_to_json(rows_[r][i]);
    }
    os << "]";
  }
  os << "\n  ]\n}\n";
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace latpin
