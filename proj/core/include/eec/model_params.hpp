#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <string_view>

namespace eec {

/// mmWave D2D link parameters. dB-valued fields are converted to linear once,
/// through `LinearRadio`, before any formula sees them.
struct RadioParams {
  double sinr_threshold_db = 5.0;
  double los_radius_m = 100.0;
  double pathloss_exp_los = 2.0;
  double pathloss_exp_nlos = 4.0;
  int nakagami_los = 3;
  int nakagami_nlos = 2;
  double intercept_los_db = -61.4;
  double intercept_nlos_db = -72.0;
  double main_lobe_db = 5.0;   // requester and worker share one pattern
  double side_lobe_db = -5.0;
  double beamwidth_rad = std::numbers::pi / 4.0;
  double noise_normalized_db = -114.0;  // noise power over transmit power

  /// Throws DomainError when an invariant does not hold.
  void validate() const;
};

struct DeploymentParams {
  double worker_intensity_per_m2 = 7e-4;
  double requester_intensity_per_m2 = 1e-4;

  void validate() const;

  /// Expected number of workers inside a LoS disk of the given radius.
  double mean_los_workers(double los_radius_m) const;
};

struct TaskParams {
  int segments = 1;
  double task_exec_rate_per_s = 0.02;  // whole task on a single worker
  double d2d_slot_s = 1.0;

  void validate() const;

  /// Each of the n segments runs n times faster than the whole task.
  double segment_exec_rate() const { return segments * task_exec_rate_per_s; }
};

struct ReliabilityParams {
  double reliability_l = 3.0;
  std::optional<int> spare_budget = 0;  // nullopt: unlimited replacements

  void validate() const;

  /// Failure rate of a worker holding the whole task: mu_f / l.
  double failure_rate(double task_exec_rate) const { return task_exec_rate / reliability_l; }

  /// Failure rate of one worker when the task is split into `segments`.
  double per_worker_failure_rate(double task_exec_rate, int segments) const {
    return failure_rate(task_exec_rate) / segments;
  }
};

struct DirectivityLevel {
  double gain;         // linear combined gain a_k
  double probability;  // b_k
};

using DirectivityDistribution = std::array<DirectivityLevel, 4>;

/// Linear-domain constants derived from a RadioParams.
struct LinearRadio {
  double sinr_threshold;
  double los_radius_m;
  double pathloss_exp_los;
  double pathloss_exp_nlos;
  int nakagami_los;
  int nakagami_nlos;
  double intercept_los;
  double intercept_nlos;
  double main_lobe;
  double side_lobe;
  double noise;
  double eta_los;  // Alzer constant for nakagami_los
  DirectivityDistribution directivity;

  /// Combined boresight gain of the intended link (M_r * M_w).
  double boresight_gain() const { return main_lobe * main_lobe; }
};

double db_to_linear(double value_db);

/// Alzer-inequality constant N (N!)^(-1/N) for an integer Nakagami shape.
double alzer_eta(int shape);

/// Four-level sectored-antenna gain distribution for an interfering link.
DirectivityDistribution directivity_distribution(const RadioParams& radio);

LinearRadio linearize(const RadioParams& radio);

/// The default parameter set, named "table1" on the command line.
struct Preset {
  RadioParams radio;
  DeploymentParams deploy;
  TaskParams task;
  ReliabilityParams reliability;
};

Preset table1_preset();

/// Returns the named preset or throws DomainError for an unknown name.
Preset preset_by_name(std::string_view name);

}  // namespace eec
