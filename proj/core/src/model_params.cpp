#include "eec/model_params.hpp"

#include <cmath>
#include <string>

#include "eec/errors.hpp"

namespace eec {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw DomainError(message);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void RadioParams::validate() const {
  require(finite(sinr_threshold_db), "sinr_threshold_db must be finite");
  require(finite(los_radius_m) && los_radius_m > 0.0, "los_radius_m must be > 0");
  require(pathloss_exp_los >= 2.0 && finite(pathloss_exp_los), "pathloss_exp_los must be >= 2");
  require(pathloss_exp_nlos >= 2.0 && finite(pathloss_exp_nlos), "pathloss_exp_nlos must be >= 2");
  require(nakagami_los >= 1, "nakagami_los must be a positive integer");
  require(nakagami_nlos >= 1, "nakagami_nlos must be a positive integer");
  require(finite(intercept_los_db) && finite(intercept_nlos_db), "path-loss intercepts must be finite");
  require(finite(main_lobe_db) && finite(side_lobe_db), "lobe gains must be finite");
  require(main_lobe_db >= side_lobe_db, "main_lobe_db must be >= side_lobe_db");
  require(beamwidth_rad > 0.0 && beamwidth_rad < 2.0 * std::numbers::pi,
          "beamwidth_rad must lie in (0, 2*pi)");
  require(finite(noise_normalized_db), "noise_normalized_db must be finite");
}

void DeploymentParams::validate() const {
  require(finite(worker_intensity_per_m2) && worker_intensity_per_m2 >= 0.0,
          "worker_intensity_per_m2 must be >= 0");
  require(finite(requester_intensity_per_m2) && requester_intensity_per_m2 >= 0.0,
          "requester_intensity_per_m2 must be >= 0");
}

double DeploymentParams::mean_los_workers(double los_radius_m) const {
  return std::numbers::pi * worker_intensity_per_m2 * los_radius_m * los_radius_m;
}

void TaskParams::validate() const {
  require(segments >= 1, "segments must be >= 1");
  require(finite(task_exec_rate_per_s) && task_exec_rate_per_s > 0.0,
          "task_exec_rate_per_s must be > 0");
  require(finite(d2d_slot_s) && d2d_slot_s > 0.0, "d2d_slot_s must be > 0");
}

void ReliabilityParams::validate() const {
  require(reliability_l > 0.0, "reliability_l must be > 0");
  require(!spare_budget || *spare_budget >= 0, "spare_budget must be >= 0");
}

double db_to_linear(double value_db) { return std::pow(10.0, value_db / 10.0); }

double alzer_eta(int shape) {
  if (shape < 1) throw DomainError("alzer_eta: shape must be >= 1");
  const double n = shape;
  return n * std::exp(-std::lgamma(n + 1.0) / n);
}

DirectivityDistribution directivity_distribution(const RadioParams& radio) {
  const double main = db_to_linear(radio.main_lobe_db);
  const double side = db_to_linear(radio.side_lobe_db);
  const double q = radio.beamwidth_rad / (2.0 * std::numbers::pi);
  return {{
      {main * main, q * q},
      {main * side, q * (1.0 - q)},
      {side * main, (1.0 - q) * q},
      {side * side, (1.0 - q) * (1.0 - q)},
  }};
}

LinearRadio linearize(const RadioParams& radio) {
  radio.validate();
  return LinearRadio{
      .sinr_threshold = db_to_linear(radio.sinr_threshold_db),
      .los_radius_m = radio.los_radius_m,
      .pathloss_exp_los = radio.pathloss_exp_los,
      .pathloss_exp_nlos = radio.pathloss_exp_nlos,
      .nakagami_los = radio.nakagami_los,
      .nakagami_nlos = radio.nakagami_nlos,
      .intercept_los = db_to_linear(radio.intercept_los_db),
      .intercept_nlos = db_to_linear(radio.intercept_nlos_db),
      .main_lobe = db_to_linear(radio.main_lobe_db),
      .side_lobe = db_to_linear(radio.side_lobe_db),
      .noise = db_to_linear(radio.noise_normalized_db),
      .eta_los = alzer_eta(radio.nakagami_los),
      .directivity = directivity_distribution(radio),
  };
}

Preset table1_preset() { return Preset{}; }

Preset preset_by_name(std::string_view name) {
  if (name == "table1") return table1_preset();
  throw DomainError("unknown preset '" + std::string(name) + "'");
}

}  // namespace eec
