#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eec/chain.hpp"
#include "eec/coverage.hpp"
#include "eec/model_params.hpp"

namespace eec {

/// Edge-server baseline. The server runs power_ratio times faster than one
/// worker and shares its processor among the requesters it serves.
struct MecParams {
  double power_ratio = 5.0;
  double mec_task_rate_mu_f = 0.007;
  double concurrent_requester_intensity = 0.0;  // requesters per m^2 served by the MEC
  double offload_success_prob = 1.0;            // uplink success probability

  void validate() const;
};

/// Idle-worker intensity when a fraction alpha of the requesters offload to
/// workers: nu_w * pi_idle evaluated at alpha * nu_r.
double congested_worker_intensity(double alpha, const DeploymentParams& deploy,
                                  double task_exec_rate);

/// Everything one bias sweep needs. The MEC load is filled in per alpha.
struct BiasScenario {
  std::string name = "default";
  RadioParams radio;
  DeploymentParams deploy;
  TaskParams task;
  MecParams mec;
  int n_max = 50;
  QuadratureConfig quadrature;
  SojournConvention sojourn = SojournConvention::HoldingTime;
};

/// Scenarios swept at step 0.1 on the edge/MEC comparison: "a" low execution
/// rate, "b" quartered workers, "c" quartered requesters, "d" four times the
/// requesters. The MEC shares the scenario's execution rate.
BiasScenario bias_scenario(std::string_view name, const Preset& base);

struct EecDelay {
  double delay_s = 0.0;  // +inf when unservable
  int optimal_n = 0;     // 0 when unservable
  bool servable = false;
  std::string diagnostic;
  std::vector<double> delay_by_n;  // entry n-1; +inf where some rank has no usable rate
};

/// Best-segmentation delay of ordered offloading under congestion: worker
/// intensity nu_w -> nu_w,idle(alpha), interferers nu_r -> alpha * nu_r, rates
/// lambda_k = p_s(k) / slot, minimized over n = 1..n_max.
EecDelay eec_delay_under_bias(double alpha, const BiasScenario& scenario);

/// slot / p_s + (1 + N) / (power_ratio * mu) with N = nu_r,MEC * pi * R_L^2.
double mec_delay(const MecParams& mec, double los_radius_m, double d2d_slot_s = 1.0);

/// alpha * eec + (1 - alpha) * mec; the endpoints return the pure-system delay
/// exactly (an infinite unused side does not leak in).
double combined_delay(double alpha, double eec_delay_s, double mec_delay_s);

struct BiasPoint {
  double alpha = 0.0;
  double tau_eec_s = 0.0;
  double tau_mec_s = 0.0;
  double tau_alpha_s = 0.0;
  int optimal_n = 0;
  bool eec_servable = false;
};

/// Evaluates one alpha, MEC load (1 - alpha) * nu_r.
BiasPoint bias_point(double alpha, const BiasScenario& scenario);

struct BiasSweep {
  std::vector<BiasPoint> points;
  BiasPoint best;
};

/// Alpha grid 0, step, 2 step, ..., 1 (1 is always included).
std::vector<double> alpha_grid(double step);

/// Argmin of tau_alpha over the grid; ties go to the smaller alpha.
BiasSweep optimal_bias(double grid_step, const BiasScenario& scenario);
BiasSweep optimal_bias(std::span<const double> alphas, const BiasScenario& scenario);

}  // namespace eec
