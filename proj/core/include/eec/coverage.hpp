#pragma once

#include <string>
#include <vector>

#include "eec/model_params.hpp"

namespace eec {

/// How the requester picks the LoS worker that receives a segment.
struct Selection {
  enum class Kind { Random, Ranked };

  Kind kind = Kind::Random;
  int rank = 0;  // 1-based distance rank, used when kind == Ranked

  static Selection random() { return {}; }
  static Selection ranked(int k);

  bool is_random() const { return kind == Kind::Random; }
  std::string to_string() const;  // "random" or "ranked:<k>"
};

/// Parses "random" or "ranked:<k>"; throws DomainError otherwise.
Selection parse_selection(const std::string& text);

struct CoverageQuery {
  RadioParams radio;
  DeploymentParams deploy;
  Selection selection;
};

/// How the NLoS interference integral over (R_L, inf) is made finite.
enum class NlosIntegration {
  ReciprocalMap,  // x = R_L / t, t in (0, 1]; no truncation error
  Truncated,      // integrate (R_L, truncation_factor * R_L) only
};

struct QuadratureConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  unsigned max_depth = 20;
  NlosIntegration nlos = NlosIntegration::ReciprocalMap;
  double truncation_factor = 10.0;

  void validate() const;
};

/// LoS interference exponent W_j(xi) for a serving distance r0 (j is the
/// index of the alternating binomial sum, 1 <= j <= N_L).
double interference_exponent_los(int j, double r0, const CoverageQuery& q,
                                 const QuadratureConfig& cfg = {});

/// NLoS interference exponent Z_j(xi). Requires pathloss_exp_nlos > 2 whenever
/// requesters are present, otherwise the far-field interference diverges.
double interference_exponent_nlos(int j, double r0, const CoverageQuery& q,
                                  const QuadratureConfig& cfg = {});

/// Conditional success probability for a LoS worker at distance r0, before
/// averaging over the serving-distance law.
double success_kernel(double r0, const CoverageQuery& q, const QuadratureConfig& cfg = {});

/// Spatially averaged success probability for a uniformly chosen LoS worker.
double success_probability_random(const CoverageQuery& q, const QuadratureConfig& cfg = {});

/// Density of the distance to the k-th nearest LoS worker, including the
/// probability that fewer than k workers exist (the density is not normalized).
double ordered_distance_pdf(int k, double r, const DeploymentParams& deploy, double los_radius_m);

/// Success probability for the k-th nearest worker, averaged against the
/// unnormalized ordered-distance density. Divide by worker_availability_mass
/// for the probability conditioned on the worker existing.
double success_probability_ranked(int k, const CoverageQuery& q, const QuadratureConfig& cfg = {});

/// Dispatches on q.selection.
double success_probability(const CoverageQuery& q, const QuadratureConfig& cfg = {});

/// Probability that at least k workers lie in the LoS disk: P(Poisson(V) >= k).
double worker_availability_mass(int k, const DeploymentParams& deploy, double los_radius_m);

/// success_probability_ranked for k = 1..k_max in one pass. The kernel is
/// sampled once on a composite Gauss-Legendre grid and reused for every rank;
/// the panel count doubles until two successive grids agree within
/// 10 * cfg.rel_tol.
std::vector<double> ranked_success_table(int k_max, const CoverageQuery& q,
                                         const QuadratureConfig& cfg = {});

}  // namespace eec
