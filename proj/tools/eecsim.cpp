// eecsim: sweeps, optimal segmentation, bias search and analytic-vs-simulation
// validation for edge offloading. Output is CSV on stdout or --out.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eec/errors.hpp"
#include "eec/scenario.hpp"
#include "eec/sweep.hpp"
#include "eec/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;

struct Common {
  std::string config_path;
  std::string preset = "table1";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<unsigned> threads;
  std::string out;
  bool simulate = false;
  std::string spares;  // "", "unbounded" or a count
  std::optional<double> reliability_l;
  std::string sojourn;  // "", "holding_time" or "per_transition"
};

eec::ScenarioConfig resolve(const Common& c) {
  eec::ScenarioConfig cfg = c.config_path.empty() ? eec::scenario_from_preset(c.preset)
                                                  : eec::load_scenario_file(c.config_path);
  if (c.seed) cfg.sim.seed = *c.seed;
  if (c.reps) cfg.sim.replications = *c.reps;
  if (c.threads) cfg.sim.threads = *c.threads;
  if (c.reliability_l) cfg.reliability.reliability_l = *c.reliability_l;
  if (c.spares == "unbounded") {
    cfg.reliability.spare_budget.reset();
  } else if (!c.spares.empty()) {
    const std::vector<int> k = eec::parse_int_grid(c.spares);
    if (k.size() != 1) throw eec::ConfigError("--spares takes one count or 'unbounded'");
    cfg.reliability.spare_budget = k.front();
  }
  if (c.sojourn == "per_transition") {
    cfg.sojourn = eec::SojournConvention::PerTransition;
  } else if (c.sojourn == "holding_time") {
    cfg.sojourn = eec::SojournConvention::HoldingTime;
  } else if (!c.sojourn.empty()) {
    throw eec::ConfigError("--sojourn must be holding_time or per_transition");
  }
  cfg.validate();
  return cfg;
}

void emit(const Common& c, const std::string& csv) {
  if (c.out.empty()) {
    std::cout << csv;
  } else {
    eec::write_file_atomic(c.out, csv);
  }
}

std::vector<int> all_segments(const eec::ScenarioConfig& cfg) {
  std::vector<int> n;
  for (int i = 1; i <= cfg.n_max; ++i) n.push_back(i);
  return n;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extreme-edge offloading analysis and simulation"};
  app.set_version_flag("--version", std::string(eec::kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--config", common.config_path, "JSON scenario file (preset plus overrides)");
  app.add_option("--preset", common.preset, "Named parameter preset when no --config is given");
  app.add_option("--seed", common.seed, "Master seed for simulation");
  app.add_option("--reps", common.reps, "Simulation replications")->check(CLI::PositiveNumber);
  app.add_option("--threads", common.threads, "Worker threads (0: all cores)");
  app.add_option("--out", common.out, "Output CSV path (default stdout)");
  app.add_flag("--simulate", common.simulate, "Add Monte Carlo columns");
  app.add_option("--spares", common.spares, "Spare worker budget: a count or 'unbounded'");
  app.add_option("--l", common.reliability_l, "Reliability parameter l");
  app.add_option("--sojourn", common.sojourn,
                 "Delay sojourn convention: holding_time (default) or per_transition");

  std::string xi = "-20:15:1";
  std::vector<std::string> selections{"random"};
  std::string radii;
  auto* coverage = app.add_subcommand("coverage", "Offloading success probability vs SINR threshold");
  coverage->add_option("--xi", xi, "Threshold grid in dB, start:stop:step or a,b,c");
  coverage->add_option("--selection", selections, "random or ranked:<k>; repeatable");
  coverage->add_option("--rl", radii, "LoS radius grid in m (default from config)");

  std::string n_grid;
  std::string variant = "ordered";
  auto* delay = app.add_subcommand("delay", "Mean task delay vs number of segments");
  delay->add_option("--n", n_grid, "Segment grid (default 1..n_max)");
  delay->add_option("--variant", variant, "random, ordered or failure");

  std::string completion_n = "1:18:1";
  std::string l_list = "1,2,5";
  auto* completion = app.add_subcommand("completion", "Task completion probability");
  completion->add_option("--n", completion_n, "Segment grid");
  completion->add_option("--l-grid", l_list, "Reliability parameter grid");

  std::string nu_w_grid = "1e-4:1e-3:1e-4";
  std::string mu_f_grid = "0.005,0.01,0.02,0.05,0.1";
  auto* contour = app.add_subcommand("contour", "Optimal segmentation over (nu_w, mu_f)");
  contour->add_option("--nu-w", nu_w_grid, "Worker intensity grid per m^2");
  contour->add_option("--mu-f", mu_f_grid, "Task execution rate grid per s");

  std::string scenario = "default";
  std::string alpha_list;
  auto* bias = app.add_subcommand("bias", "Edge/MEC split sweep and optimal alpha");
  bias->add_option("--scenario", scenario, "default, a, b, c or d");
  bias->add_option("--alpha", alpha_list, "Alpha grid (default 0..1 at analysis.alpha_step)");

  auto* validate = app.add_subcommand("validate", "Analytic vs Monte Carlo check suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const eec::ScenarioConfig cfg = resolve(common);
    if (*coverage) {
      std::vector<eec::Selection> sel;
      for (const auto& s : selections) sel.push_back(eec::parse_selection(s));
      std::vector<double> rl = radii.empty() ? std::vector<double>{cfg.radio.los_radius_m}
                                             : eec::parse_grid(radii);
      emit(common, eec::to_csv(eec::cmd_coverage(cfg, eec::parse_grid(xi), sel, rl, common.simulate)));
    } else if (*delay) {
      const auto n = n_grid.empty() ? all_segments(cfg) : eec::parse_int_grid(n_grid);
      emit(common, eec::to_csv(eec::cmd_delay(cfg, n, eec::parse_delay_variant(variant),
                                              common.simulate)));
    } else if (*completion) {
      emit(common, eec::to_csv(eec::cmd_completion(cfg, eec::parse_int_grid(completion_n),
                                                   eec::parse_grid(l_list), common.simulate)));
    } else if (*contour) {
      emit(common, eec::to_csv(eec::cmd_contour(cfg, eec::parse_grid(nu_w_grid),
                                                eec::parse_grid(mu_f_grid))));
    } else if (*bias) {
      const auto alphas =
          alpha_list.empty() ? eec::alpha_grid(cfg.alpha_step) : eec::parse_grid(alpha_list);
      emit(common, eec::to_csv(eec::cmd_bias(cfg, scenario, alphas)));
    } else if (*validate) {
      const eec::ValidationReport report = eec::cmd_validate(cfg);
      emit(common, eec::to_csv(report.result));
      std::cerr << "validate: " << report.checks << " checks, " << report.failures << " failed\n";
      return report.passed() ? kExitOk : kExitValidation;
    }
  } catch (const eec::ConfigError& e) {
    std::cerr << "eecsim: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const eec::DomainError& e) {
    std::cerr << "eecsim: invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "eecsim: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
