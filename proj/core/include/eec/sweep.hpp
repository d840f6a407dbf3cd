#pragma once

#include <string>
#include <vector>

#include "eec/chain.hpp"
#include "eec/coverage.hpp"
#include "eec/csv.hpp"
#include "eec/scenario.hpp"

namespace eec {

/// Parses "start:stop:step" (inclusive, step may be negative), a comma list,
/// or "" (empty grid). Throws ConfigError on malformed input.
std::vector<double> parse_grid(const std::string& text);
std::vector<int> parse_int_grid(const std::string& text);

enum class DelayVariant { Random, Ordered, OrderedFailure };

DelayVariant parse_delay_variant(const std::string& text);  // random | ordered | failure
std::string to_string(DelayVariant v);

/// Offloading rate for allocation slots 1..n_max: p_s / slot for random
/// selection, p_s(k) / slot for ordered selection.
std::vector<double> offload_rates(const ScenarioConfig& cfg, DelayVariant variant, int n_max);

/// Chain for n segments from precomputed slot rates (rates.size() >= n).
/// The failure variant takes l and the spare budget from cfg.reliability.
ChainModel delay_model(const ScenarioConfig& cfg, DelayVariant variant, int n,
                       const std::vector<double>& rates);

struct DelayCurve {
  std::vector<int> segments;
  std::vector<double> delay_s;  // +inf where some slot rate is unusable
  int optimal_n = 0;            // smallest n attaining the minimum; 0 if none is finite
};

DelayCurve delay_curve(const ScenarioConfig& cfg, DelayVariant variant,
                       const std::vector<int>& segments);

/// Optimal n over 1..cfg.n_max.
int optimal_segments(const ScenarioConfig& cfg, DelayVariant variant);

SweepResult cmd_coverage(const ScenarioConfig& cfg, const std::vector<double>& xi_db,
                         const std::vector<Selection>& selections,
                         const std::vector<double>& los_radii_m, bool simulate);

SweepResult cmd_delay(const ScenarioConfig& cfg, const std::vector<int>& segments,
                      DelayVariant variant, bool simulate);

/// Rows per (n, l). An unbounded spare budget completes with probability 1.
SweepResult cmd_completion(const ScenarioConfig& cfg, const std::vector<int>& segments,
                           const std::vector<double>& reliability_l, bool simulate);

/// Optimal ordered-selection n for every (nu_w, mu_f) cell.
SweepResult cmd_contour(const ScenarioConfig& cfg, const std::vector<double>& worker_intensity,
                        const std::vector<double>& task_exec_rate);

/// Bias sweep for a named scenario (default, a, b, c, d) built on cfg. The last
/// row reports the optimal alpha.
SweepResult cmd_bias(const ScenarioConfig& cfg, const std::string& scenario,
                     const std::vector<double>& alphas);

struct ValidationReport {
  SweepResult result;
  std::size_t checks = 0;
  std::size_t failures = 0;
  bool passed() const { return failures == 0; }
};

/// Analytic-versus-simulation suite (coverage, delay for every variant,
/// completion, worker idle probability) at cfg.sim.seed and
/// cfg.sim.replications. Each row's note reads "pass" or "FAIL" with the
/// measured gap and its bound.
ValidationReport cmd_validate(const ScenarioConfig& cfg);

}  // namespace eec
