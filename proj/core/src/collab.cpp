#include "eec/collab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "eec/chain.hpp"
#include "eec/errors.hpp"

namespace eec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Below this many expected idle LoS workers nothing can be served.
constexpr double kMinWorkerMass = 1e-9;
// Ranks whose unnormalized success probability falls below this are treated
// as unusable (their allocation time would exceed any useful horizon).
constexpr double kMinRankSuccess = 1e-12;

void require(bool condition, const char* message) {
  if (!condition) throw DomainError(message);
}

void check_alpha(double alpha) {
  require(std::isfinite(alpha) && alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
}

}  // namespace

void MecParams::validate() const {
  require(std::isfinite(power_ratio) && power_ratio > 0.0, "mec power_ratio must be > 0");
  require(std::isfinite(mec_task_rate_mu_f) && mec_task_rate_mu_f > 0.0,
          "mec_task_rate_mu_f must be > 0");
  require(std::isfinite(concurrent_requester_intensity) && concurrent_requester_intensity >= 0.0,
          "mec concurrent_requester_intensity must be >= 0");
  require(offload_success_prob > 0.0 && offload_success_prob <= 1.0,
          "mec offload_success_prob must lie in (0, 1]");
}

double congested_worker_intensity(double alpha, const DeploymentParams& deploy,
                                  double task_exec_rate) {
  check_alpha(alpha);
  deploy.validate();
  if (alpha == 0.0 || deploy.worker_intensity_per_m2 == 0.0) return deploy.worker_intensity_per_m2;
  return deploy.worker_intensity_per_m2 *
         worker_idle_probability(task_exec_rate, alpha * deploy.requester_intensity_per_m2,
                                 deploy.worker_intensity_per_m2);
}

BiasScenario bias_scenario(std::string_view name, const Preset& base) {
  BiasScenario s;
  s.name = std::string(name);
  s.radio = base.radio;
  s.deploy = base.deploy;
  s.task = base.task;
  if (name == "a") {
    s.task.task_exec_rate_per_s = 0.002;
  } else if (name == "b") {
    s.deploy.worker_intensity_per_m2 /= 4.0;
  } else if (name == "c") {
    s.deploy.requester_intensity_per_m2 /= 4.0;
  } else if (name == "d") {
    s.deploy.requester_intensity_per_m2 *= 4.0;
  } else if (name != "default") {
    throw DomainError("unknown bias scenario '" + std::string(name) + "' (expected a, b, c, d)");
  }
  s.mec.mec_task_rate_mu_f = s.task.task_exec_rate_per_s;
  return s;
}

EecDelay eec_delay_under_bias(double alpha, const BiasScenario& scenario) {
  check_alpha(alpha);
  require(scenario.n_max >= 1, "n_max must be >= 1");
  scenario.task.validate();
  const double mu = scenario.task.task_exec_rate_per_s;

  EecDelay out;
  out.delay_s = kInf;
  out.delay_by_n.assign(static_cast<std::size_t>(scenario.n_max), kInf);

  CoverageQuery q;
  q.radio = scenario.radio;
  q.deploy.worker_intensity_per_m2 = congested_worker_intensity(alpha, scenario.deploy, mu);
  q.deploy.requester_intensity_per_m2 = alpha * scenario.deploy.requester_intensity_per_m2;
  q.selection = Selection::ranked(1);
  const double mass = q.deploy.mean_los_workers(q.radio.los_radius_m);
  if (mass < kMinWorkerMass) {
    out.diagnostic = "no idle LoS workers (expected count " + std::to_string(mass) + ")";
    return out;
  }

  const std::vector<double> ps = ranked_success_table(scenario.n_max, q, scenario.quadrature);
  std::vector<double> rates;
  rates.reserve(ps.size());
  for (int n = 1; n <= scenario.n_max; ++n) {
    const double p = ps[static_cast<std::size_t>(n - 1)];
    if (!(p > kMinRankSuccess)) break;  // p_s(k) only shrinks with k
    rates.push_back(p / scenario.task.d2d_slot_s);
    const ChainModel model = build_level_dependent(n, rates, mu);
    const double d = mean_delay(model, scenario.sojourn);
    out.delay_by_n[static_cast<std::size_t>(n - 1)] = d;
    if (d < out.delay_s) {
      out.delay_s = d;
      out.optimal_n = n;
    }
  }
  out.servable = out.optimal_n > 0;
  if (!out.servable) out.diagnostic = "the nearest worker has no usable offloading rate";
  return out;
}

double mec_delay(const MecParams& mec, double los_radius_m, double d2d_slot_s) {
  mec.validate();
  require(std::isfinite(los_radius_m) && los_radius_m > 0.0, "los_radius_m must be > 0");
  require(std::isfinite(d2d_slot_s) && d2d_slot_s > 0.0, "d2d_slot_s must be > 0");
  const double load =
      mec.concurrent_requester_intensity * std::numbers::pi * los_radius_m * los_radius_m;
  return d2d_slot_s / mec.offload_success_prob +
         (1.0 + load) / (mec.power_ratio * mec.mec_task_rate_mu_f);
}

double combined_delay(double alpha, double eec_delay_s, double mec_delay_s) {
  check_alpha(alpha);
  if (alpha == 0.0) return mec_delay_s;
  if (alpha == 1.0) return eec_delay_s;
  return alpha * eec_delay_s + (1.0 - alpha) * mec_delay_s;
}

BiasPoint bias_point(double alpha, const BiasScenario& scenario) {
  const EecDelay eec = eec_delay_under_bias(alpha, scenario);
  MecParams mec = scenario.mec;
  mec.concurrent_requester_intensity = (1.0 - alpha) * scenario.deploy.requester_intensity_per_m2;

  BiasPoint p;
  p.alpha = alpha;
  p.tau_eec_s = eec.delay_s;
  p.tau_mec_s = mec_delay(mec, scenario.radio.los_radius_m, scenario.task.d2d_slot_s);
  p.tau_alpha_s = combined_delay(alpha, p.tau_eec_s, p.tau_mec_s);
  p.optimal_n = eec.optimal_n;
  p.eec_servable = eec.servable;
  return p;
}

std::vector<double> alpha_grid(double step) {
  require(std::isfinite(step) && step > 0.0 && step < 1.0, "alpha grid step must lie in (0, 1)");
  const auto intervals = static_cast<int>(std::ceil(1.0 / step - 1e-9));
  std::vector<double> grid;
  // Rounded so that 0.1 steps print as 0.3 rather than 0.30000000000000004.
  for (int i = 0; i < intervals; ++i) grid.push_back(std::round(i * step * 1e12) / 1e12);
  grid.push_back(1.0);
  return grid;
}

BiasSweep optimal_bias(double grid_step, const BiasScenario& scenario) {
  const std::vector<double> grid = alpha_grid(grid_step);
  return optimal_bias(std::span<const double>(grid), scenario);
}

BiasSweep optimal_bias(std::span<const double> alphas, const BiasScenario& scenario) {
  require(!alphas.empty(), "alpha grid must not be empty");
  BiasSweep sweep;
  sweep.points.reserve(alphas.size());
  for (double a : alphas) sweep.points.push_back(bias_point(a, scenario));
  const BiasPoint* best = &sweep.points.front();
  for (const BiasPoint& p : sweep.points) {
    if (p.tau_alpha_s < best->tau_alpha_s ||
        (p.tau_alpha_s == best->tau_alpha_s && p.alpha < best->alpha)) {
      best = &p;
    }
  }
  sweep.best = *best;
  return sweep;
}

}  // namespace eec
