#include "latpin/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "latpin/csv.hpp"
#include "latpin/errors.hpp"

namespace latpin {

namespace {

double parse_double(const std::string& key, const std::string& v) {
  double out;
  const char* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end) {
    fail(ErrorCode::Config, "bad numeric value for '" + key + "': " + v);
  }
  return out;
}

int parse_int(const std::string& key, const std::string& v) {
  int out;
  const char* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end) {
    fail(ErrorCode::Config, "bad integer value for '" + key + "': " + v);
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(ErrorCode::Config, "bad boolean value for '" + key + "': " + v);
}

ModelId parse_model(const std::string& v) {
  if (v == "cubic_const") return ModelId::cubic_const;
  if (v == "cubic_quintic") return ModelId::cubic_quintic;
  fail(ErrorCode::Config, "unknown model '" + v + "'");
}

LatticeKind parse_lattice(const std::string& v) {
  if (v == "square") return LatticeKind::square;
  if (v == "hex") return LatticeKind::hex;
  fail(ErrorCode::Config, "unknown lattice '" + v + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

void apply_key_value(RunConfig& cfg, const std::string& key,
                     const std::string& value) {
  if (key == "command") cfg.command = value;
  else if (key == "model") cfg.model = parse_model(value);
  else if (key == "m1") cfg.m1 = parse_int(key, value);
  else if (key == "m2") cfg.m2 = parse_int(key, value);
  else if (key == "lattice") cfg.lattice = parse_lattice(value);
  else if (key == "s_hat") cfg.s_hat.push_back(parse_double(key, value));
  else if (key == "output") cfg.output = value;
  else if (key == "state_output") cfg.state_output = value;
  else if (key == "json") cfg.json = parse_bool(key, value);
  else if (key == "metadata") cfg.metadata = parse_bool(key, value);
  else if (key == "J") cfg.J = parse_int(key, value);
  else if (key == "n_max") cfg.n_max = parse_int(key, value);
  else if (key == "M_max") cfg.M_max = parse_int(key, value);
  else if (key == "grid_n") cfg.grid_n = parse_int(key, value);
  else if (key == "scan_appendix") cfg.scan_appendix = parse_bool(key, value);
  else if (key == "max_folds") cfg.max_folds = parse_int(key, value);
  else if (key == "skip_folds") cfg.skip_folds = parse_int(key, value);
  else if (key == "ds0") cfg.ds0 = parse_double(key, value);
  else if (key == "ds_max") cfg.ds_max = parse_double(key, value);
  else if (key == "newton_tol") cfg.newton_tol = parse_double(key, value);
  else if (key == "fold_r_tol") cfg.fold_r_tol = parse_double(key, value);
  else if (key == "T_max") cfg.T_max = parse_double(key, value);
  else if (key == "depin_factor") cfg.depin_factor = parse_double(key, value);
  else if (key == "side") cfg.side = value;
  else if (key == "threads") cfg.threads = parse_int(key, value);
  else if (key == "ell_min") cfg.ell_min = parse_double(key, value);
  else if (key == "ell_max") cfg.ell_max = parse_double(key, value);
  else if (key == "L_points") cfg.L_points = parse_int(key, value);
  else if (key == "rung_samples") cfg.rung_samples = parse_int(key, value);
  else if (key == "lambda_abs") cfg.lambda_abs = parse_double(key, value);
  else if (key == "box_factor") cfg.box_factor = parse_double(key, value);
  else if (key == "r_start") cfg.r_start = parse_double(key, value);
  else fail(ErrorCode::Config, "unknown config key '" + key + "'");
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::Config,
           "line " + std::to_string(lineno) + " is not key=value: " + line);
    }
    apply_key_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Config, "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string canonical_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "J=" << cfg.J << "\n";
  os << "L_points=" << cfg.L_points << "\n";
  os << "M_max=" << cfg.M_max << "\n";
  os << "T_max=" << format_double(cfg.T_max) << "\n";
  os << "box_factor=" << format_double(cfg.box_factor) << "\n";
  os << "command=" << cfg.command << "\n";
  os << "depin_factor=" << format_double(cfg.depin_factor) << "\n";
  os << "ds0=" << format_double(cfg.ds0) << "\n";
  os << "ds_max=" << format_double(cfg.ds_max) << "\n";
  os << "ell_max=" << format_double(cfg.ell_max) << "\n";
  os << "ell_min=" << format_double(cfg.ell_min) << "\n";
  os << "fold_r_tol=" << format_double(cfg.fold_r_tol) << "\n";
  os << "grid_n=" << cfg.grid_n << "\n";
  os << "json=" << (cfg.json ? "true" : "false") << "\n";
  os << "lambda_abs=" << format_double(cfg.lambda_abs) << "\n";
  os << "lattice=" << to_string(cfg.lattice) << "\n";
  os << "m1=" << cfg.m1 << "\n";
  os << "m2=" << cfg.m2 << "\n";
  os << "max_folds=" << cfg.max_folds << "\n";
  os << "metadata=" << (cfg.metadata ? "true" : "false") << "\n";
  os << "model=" << to_string(cfg.model) << "\n";
  os << "n_max=" << cfg.n_max << "\n";
  os << "newton_tol=" << format_double(cfg.newton_tol) << "\n";
  os << "output=" << cfg.output << "\n";
  if (!std::isnan(cfg.r_start)) os << "r_start=" << format_double(cfg.r_start) << "\n";
  os << "rung_samples=" << cfg.rung_samples << "\n";
  for (double s : cfg.s_hat) os << "s_hat=" << format_double(s) << "\n";
  os << "scan_appendix=" << (cfg.scan_appendix ? "true" : "false") << "\n";
  os << "side=" << cfg.side << "\n";
  os << "skip_folds=" << cfg.skip_folds << "\n";
  os << "state_output=" << cfg.state_output << "\n";
  os << "threads=" << cfg.threads << "\n";
  return os.str();
}

std::uint64_t config_hash(const RunConfig& cfg) {
  return fnv1a(canonical_config(cfg));
}

void validate(const RunConfig& cfg) {
  static const char* commands[] = {"eigen",    "lambda", "width", "diagram",
                                   "continue", "depin",  "compare"};
  if (std::find(std::begin(commands), std::end(commands), cfg.command) ==
      std::end(commands)) {
    fail(ErrorCode::Config, "unknown command '" + cfg.command + "'");
  }
  if (cfg.m1 == 0 && cfg.m2 == 0) fail(ErrorCode::Config, "orientation (0,0)");
  for (double s : cfg.s_hat) {
    if (!(s > 0)) fail(ErrorCode::Config, "s_hat must be positive");
  }
  if (cfg.n_max != 0 && (cfg.n_max < 4 || cfg.n_max > 200)) {
    fail(ErrorCode::Config, "n_max must lie in [4, 200]");
  }
  if (cfg.M_max < 1) fail(ErrorCode::Config, "M_max must be >= 1");
  if (cfg.grid_n < 100) fail(ErrorCode::Config, "grid_n must be >= 100");
  if (cfg.J != 0 && cfg.J < 8) fail(ErrorCode::Config, "J must be >= 8");
  if (cfg.skip_folds < 0) fail(ErrorCode::Config, "skip_folds must be >= 0");
  if (cfg.max_folds < 1) fail(ErrorCode::Config, "max_folds must be >= 1");
  if (!(cfg.ds0 > 0) || !(cfg.ds_max >= cfg.ds0)) {
    fail(ErrorCode::Config, "need 0 < ds0 <= ds_max");
  }
  if (!(cfg.newton_tol > 0) || cfg.newton_tol > 1e-6) {
    fail(ErrorCode::Config, "newton_tol must lie in (0, 1e-6]");
  }
  if (!(cfg.T_max > 0)) fail(ErrorCode::Config, "T_max must be positive");
  if (cfg.side != "left" && cfg.side != "right" && cfg.side != "both") {
    fail(ErrorCode::Config, "side must be left, right or both");
  }
  if (cfg.threads < 0) fail(ErrorCode::Config, "threads must be >= 0");
  if (cfg.rung_samples < 4) fail(ErrorCode::Config, "rung_samples must be >= 4");
  if (cfg.L_points < 2) fail(ErrorCode::Config, "L_points must be >= 2");
  if (cfg.lambda_abs < 0) fail(ErrorCode::Config, "lambda_abs must be >= 0");
  const bool needs_s = cfg.command == "width" || cfg.command == "diagram" ||
                       cfg.command == "continue" || cfg.command == "depin" ||
                       cfg.command == "compare";
  if (needs_s && cfg.s_hat.empty()) {
    fail(ErrorCode::Config, "command '" + cfg.command + "' needs s_hat");
  }
  const bool single_s = cfg.command == "diagram" || cfg.command == "continue" ||
                        cfg.command == "depin";
  if (single_s && cfg.s_hat.size() != 1) {
    fail(ErrorCode::Config, "command '" + cfg.command + "' takes one s_hat");
  }
}

}  // namespace latpin
