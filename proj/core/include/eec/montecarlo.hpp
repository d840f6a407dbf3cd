#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "eec/chain.hpp"
#include "eec/coverage.hpp"
#include "eec/rng.hpp"

namespace eec {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Which endpoint decides whether an interferer is LoS: the receiving worker
/// (the geometry the coverage formulas integrate over) or the typical
/// requester at the origin.
enum class LosReference { Receiver, Requester };

struct SimConfig {
  std::uint64_t seed = 1;
  std::size_t replications = 100000;
  std::optional<double> arena_radius_m;  // nullopt: default_arena_radius
  LosReference los_reference = LosReference::Receiver;
  unsigned threads = 0;                  // 0: hardware concurrency

  void validate() const;
};

/// Interferer disk radius around the origin: max(10 R_L, the radius beyond
/// which the dropped NLoS interferers change the Laplace exponent of the
/// worst-placed link by less than 1e-4).
double default_arena_radius(const RadioParams& radio, const DeploymentParams& deploy);

/// One spatial draw. Workers are sampled in the LoS disk only, since no other
/// worker can serve; requesters (the interferers) cover the arena. The typical
/// requester sits at the origin and is not in `requesters`.
struct NetworkRealization {
  std::vector<Point> workers;
  std::vector<Point> requesters;
  double arena_radius_m = 0.0;
  std::uint64_t link_seed = 0;  // drives fading and antenna-alignment draws
};

NetworkRealization sample_network(Engine& rng, const DeploymentParams& deploy,
                                  const RadioParams& radio, double arena_radius_m);

/// Realization for stream 0 of `seed`.
NetworkRealization sample_network(std::uint64_t seed, const DeploymentParams& deploy,
                                  const RadioParams& radio, double arena_radius_m);

/// SINR (linear) of the link from the origin to `worker`. Fading and
/// interferer antenna gains are drawn from a stream keyed by the realization's
/// link seed and the worker position, so repeated calls agree.
double link_sinr(const NetworkRealization& net, Point worker, const LinearRadio& radio,
                 LosReference reference = LosReference::Receiver);

struct SuccessEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t replications = 0;
  std::size_t resampled = 0;  // draws discarded for lacking the selected worker
};

/// Fraction of realizations whose selected worker clears the threshold. A
/// realization without the selected worker (no LoS worker, or fewer than k for
/// ranked:k) is redrawn, so ranked estimates are conditional on the worker
/// existing.
SuccessEstimate empirical_success_probability(const SimConfig& cfg, const CoverageQuery& q);

/// Same draws evaluated at several thresholds; entry i uses thresholds_db[i].
std::vector<SuccessEstimate> empirical_success_curve(const SimConfig& cfg, const CoverageQuery& q,
                                                     const std::vector<double>& thresholds_db);

struct Trajectory {
  double delay_s = 0.0;
  bool completed = false;
};

/// Event-driven run of one task: each allocated worker carries its own
/// completion and failure clocks and the next allocation is an exponential
/// clock at the rate of the slot being filled. Uses only the model's rates,
/// never its matrices.
Trajectory simulate_task_trajectory(Engine& rng, const ChainModel& model);
Trajectory simulate_task_trajectory(std::uint64_t seed, const ChainModel& model);

struct DelayEstimate {
  double mean_s = 0.0;
  double std_error = 0.0;
  double completion_fraction = 0.0;
  std::size_t replications = 0;
};

DelayEstimate empirical_delay(const SimConfig& cfg, const ChainModel& model);

}  // namespace eec
