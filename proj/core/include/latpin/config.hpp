#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latpin/lattice.hpp"
#include "latpin/model.hpp"

namespace latpin {

/// One reproducible run: a subcommand plus every numeric knob it may read.
/// Serializes losslessly to the flat key=value config format (repeated
/// s_hat keys express sweeps).
struct RunConfig {
  std::string command;  // eigen | lambda | width | diagram | continue | depin | compare
  ModelId model = ModelId::cubic_const;
  int m1 = 1;
  int m2 = 0;
  LatticeKind lattice = LatticeKind::square;
  std::vector<double> s_hat;  // sweep list
  std::string output;         // empty: stdout
  std::string state_output;   // continue: final-state CSV (default: <output>.state.csv)
  bool json = false;          // emit a .json mirror next to the CSV
  bool metadata = true;       // echo the metadata block in the CSV

  // numeric overrides (0 / negative meaning "auto" where documented)
  int J = 0;
  int n_max = 0;
  int M_max = 5;
  int grid_n = 400;
  bool scan_appendix = false;
  int max_folds = 12;
  int skip_folds = 4;
  double ds0 = 1e-3;
  double ds_max = 1e-2;
  double newton_tol = 1e-10;
  double fold_r_tol = 1e-12;
  double T_max = 4000.0;
  double depin_factor = 2.0;
  std::string side = "both";  // depin: left | right | both
  int threads = 0;            // 0: hardware concurrency
  double ell_min = 0.0;       // diagram: front-separation window, z units
  double ell_max = 0.0;
  int L_points = 400;
  int rung_samples = 64;
  double lambda_abs = 0.0;    // 0: compute from the recurrence
  double box_factor = 3.0;
  double r_start = std::numeric_limits<double>::quiet_NaN();  // NaN: Maxwell point
};

/// Applies one key=value pair. Throws Error(Config) for unknown keys or
/// unparsable values.
void apply_key_value(RunConfig& cfg, const std::string& key,
                     const std::string& value);

/// Flat key=value text, one pair per line; '#' starts a comment; repeated
/// s_hat keys accumulate the sweep.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// Canonical serialization: alphabetical keys, sweep keys repeated in order.
/// Round-trips losslessly through parse_config_text.
std::string canonical_config(const RunConfig& cfg);

/// FNV-1a hash of the canonical serialization, echoed into output metadata.
std::uint64_t config_hash(const RunConfig& cfg);

/// Range checks against the documented bounds of each module.
void validate(const RunConfig& cfg);

}  // namespace latpin
