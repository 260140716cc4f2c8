// Command-line front end: orientation-dependent pinning regions and
// snakes-and-ladders diagrams of localised states on bistable lattices.

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "latpin/driver.hpp"
#include "latpin/errors.hpp"

namespace {

// Every flag funnels through the same key=value layer as the config file, so
// file values and command-line overrides cannot drift apart. Options record
// pairs in parse order; the file (if any) is applied first.
struct CliState {
  std::string config_file;
  std::vector<std::pair<std::string, std::string>> kv;

  CLI::Option* opt(CLI::App* cmd, const std::string& flag,
                   const std::string& key, const std::string& help) {
    return cmd->add_option_function<std::string>(
        flag,
        [this, key](const std::string& v) { kv.emplace_back(key, v); },
        help);
  }
  CLI::Option* flag(CLI::App* cmd, const std::string& name,
                    const std::string& key, const std::string& help) {
    return cmd->add_flag_callback(
        name, [this, key] { kv.emplace_back(key, "true"); }, help);
  }
};

void add_common(CLI::App* cmd, CliState& st) {
  cmd->add_option("--config", st.config_file,
                  "flat key=value config file (flags override it)");
  st.opt(cmd, "--model", "model", "cubic_const | cubic_quintic")
      ->check(CLI::IsMember({"cubic_const", "cubic_quintic"}));
  cmd->add_option_function<std::string>(
      "--orient",
      [&st](const std::string& v) {
        const auto comma = v.find(',');
        if (comma == std::string::npos) {
          throw CLI::ValidationError("--orient", "expects m1,m2");
        }
        st.kv.emplace_back("m1", v.substr(0, comma));
        st.kv.emplace_back("m2", v.substr(comma + 1));
      },
      "orientation m1,m2 (e.g. 2,1)");
  st.opt(cmd, "--lattice", "lattice", "square | hex")
      ->check(CLI::IsMember({"square", "hex"}));
  cmd->add_option_function<std::vector<std::string>>(
      "-s,--s",
      [&st](const std::vector<std::string>& vs) {
        for (const auto& v : vs) st.kv.emplace_back("s_hat", v);
      },
      "s_hat value(s); repeat for sweeps");
  st.opt(cmd, "-o,--output", "output", "output CSV path (default stdout)");
  st.flag(cmd, "--json", "json", "also write a JSON mirror");
  cmd->add_flag_callback(
      "--no-metadata",
      [&st] { st.kv.emplace_back("metadata", "false"); },
      "omit the metadata comment block");
  st.opt(cmd, "--threads", "threads", "worker threads for sweeps");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "latpin: pinning regions and snakes-and-ladders bifurcation structure "
      "of localised states on bistable square and hexagonal lattices"};
  app.require_subcommand(1);

  CliState st;

  auto* eigen = app.add_subcommand(
      "eigen", "real eigenvalue family, smallest complex root, and the "
               "joint-root scan");
  add_common(eigen, st);
  st.opt(eigen, "--M-max", "M_max", "real family depth");
  st.flag(eigen, "--scan-appendix", "scan_appendix",
          "scan for simultaneous roots of the symbol and its derivative "
          "(expected none)");
  st.opt(eigen, "--grid-n", "grid_n", "scan grid per axis");
  st.opt(eigen, "--box-factor", "box_factor",
         "search box in units of the smallest real eigenvalue");

  auto* lambda = app.add_subcommand(
      "lambda", "late-term recurrence trace and the pinning constant Lambda");
  add_common(lambda, st);
  st.opt(lambda, "--n-max", "n_max", "recurrence depth (<= 200)");

  auto* width = app.add_subcommand(
      "width", "analytic pinning half-width over an s_hat sweep");
  add_common(width, st);
  st.opt(width, "--n-max", "n_max", "recurrence depth");
  st.opt(width, "--lambda-abs", "lambda_abs",
         "use |Lambda| instead of computing it");

  auto* diagram =
      app.add_subcommand("diagram", "analytic snakes-and-ladders point sets");
  add_common(diagram, st);
  st.opt(diagram, "--ell-min", "ell_min",
         "front-separation window start (z units)");
  st.opt(diagram, "--ell-max", "ell_max",
         "front-separation window end (z units)");
  st.opt(diagram, "--L-points", "L_points", "snake sampling density");
  st.opt(diagram, "--rung-samples", "rung_samples", "points per rung");
  st.opt(diagram, "--lambda-abs", "lambda_abs",
         "use |Lambda| instead of computing it");
  st.opt(diagram, "-J,--points", "J", "domain size for the proxy measure");

  auto* cont = app.add_subcommand(
      "continue", "pseudo-arclength continuation: branch, folds, measured "
                  "pinning width");
  add_common(cont, st);
  st.opt(cont, "-J,--points", "J", "effective lattice points (0 = auto)");
  st.opt(cont, "--max-folds", "max_folds", "stop after this many folds");
  st.opt(cont, "--skip-folds", "skip_folds",
         "skew-dominated folds to skip in the width statistic");
  st.opt(cont, "--ds0", "ds0", "initial arclength step");
  st.opt(cont, "--ds-max", "ds_max", "maximum arclength step");
  st.opt(cont, "--newton-tol", "newton_tol", "corrector tolerance");
  st.opt(cont, "--fold-r-tol", "fold_r_tol", "fold bisection bracket target");
  st.opt(cont, "--r-start", "r_start", "starting r (default: Maxwell point)");
  st.opt(cont, "--state-output", "state_output", "final state CSV (j,z,u)");

  auto* depin = app.add_subcommand(
      "depin", "bisected depinning thresholds from time integration");
  add_common(depin, st);
  st.opt(depin, "-J,--points", "J", "effective lattice points");
  st.opt(depin, "--T-max", "T_max", "classification horizon");
  st.opt(depin, "--side", "side", "left | right | both")
      ->check(CLI::IsMember({"left", "right", "both"}));
  st.opt(depin, "--depin-factor", "depin_factor",
         "outer bracket end in analytic widths");
  st.opt(depin, "--lambda-abs", "lambda_abs",
         "use |Lambda| instead of computing it");

  auto* compare = app.add_subcommand(
      "compare", "joined analytic/numeric width table with relative errors");
  add_common(compare, st);
  st.opt(compare, "-J,--points", "J", "effective lattice points (0 = auto)");
  st.opt(compare, "--max-folds", "max_folds", "folds per point");
  st.opt(compare, "--skip-folds", "skip_folds", "folds to skip");
  st.opt(compare, "--n-max", "n_max", "recurrence depth");
  st.opt(compare, "--lambda-abs", "lambda_abs",
         "use |Lambda| instead of computing it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : latpin::kExitConfig;
  }

  try {
    latpin::RunConfig cfg;
    if (!st.config_file.empty()) {
      cfg = latpin::load_config_file(st.config_file);
    }
    cfg.command = app.get_subcommands().front()->get_name();
    bool s_reset = false;
    for (const auto& [key, value] : st.kv) {
      if (key == "s_hat" && !s_reset) {
        cfg.s_hat.clear();  // flags replace, not extend, a file sweep
        s_reset = true;
      }
      latpin::apply_key_value(cfg, key, value);
    }
    return latpin::run(cfg, std::cout, std::cerr);
  } catch (const latpin::Error& e) {
    std::cerr << (e.code() == latpin::ErrorCode::Config ? "config error: "
                                                        : "error: ")
              << e.what() << "\n";
    return e.code() == latpin::ErrorCode::Config ? latpin::kExitConfig
                                                 : latpin::kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return latpin::kExitNumerical;
  }
}
