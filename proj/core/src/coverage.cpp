#include "eec/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "eec/errors.hpp"
#include "quadrature.hpp"

namespace eec {

Selection Selection::ranked(int k) {
  if (k < 1) throw DomainError("ranked selection requires k >= 1");
  return Selection{Kind::Ranked, k};
}

std::string Selection::to_string() const {
  return is_random() ? std::string("random") : "ranked:" + std::to_string(rank);
}

Selection parse_selection(const std::string& text) {
  if (text == "random") return Selection::random();
  const std::string prefix = "ranked:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string digits = text.substr(prefix.size());
    std::size_t used = 0;
    int k = 0;
    try {
      k = std::stoi(digits, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == digits.size() && used > 0) return Selection::ranked(k);
  }
  throw DomainError("selection must be 'random' or 'ranked:<k>', got '" + text + "'");
}

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("quadrature tolerances must be > 0");
  if (max_depth == 0) throw DomainError("quadrature max_depth must be >= 1");
  if (nlos == NlosIntegration::Truncated && !(truncation_factor > 1.0))
    throw DomainError("truncation_factor must be > 1");
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 1 - (1 + u)^(-n), accurate for small u.
double one_minus_inverse_power(double u, int n) {
  return -std::expm1(-n * std::log1p(u));
}

// Integrates over [a, b], splitting at `knee` when it lies inside, so the
// quadrature never straddles the corner where the integrand saturates.
template <class F>
double integrate_with_knee(F&& f, double a, double b, double knee, const QuadratureConfig& cfg,
                           const char* what) {
  if (knee > a && knee < b) {
    return detail::integrate(f, a, knee, cfg, what) + detail::integrate(f, knee, b, cfg, what);
  }
  return detail::integrate(f, a, b, cfg, what);
}

// Everything the success kernel needs, already in linear units.
class KernelModel {
 public:
  KernelModel(const CoverageQuery& q, const QuadratureConfig& cfg)
      : radio_(linearize(q.radio)), requesters_(q.deploy.requester_intensity_per_m2), outer_(cfg) {
    q.deploy.validate();
    cfg.validate();
    inner_ = cfg;
    inner_.rel_tol = std::max(cfg.rel_tol * 1e-2, 1e-14);
    inner_.abs_tol = std::max(cfg.abs_tol * 1e-2, 1e-300);
    if (requesters_ > 0.0 && radio_.pathloss_exp_nlos <= 2.0)
      throw DomainError("NLoS interference diverges unless pathloss_exp_nlos > 2");
  }

  const LinearRadio& radio() const { return radio_; }
  const QuadratureConfig& outer() const { return outer_; }

  void check_index(int j) const {
    if (j < 1 || j > radio_.nakagami_los)
      throw DomainError("binomial index j must lie in [1, nakagami_los]");
  }

  void check_distance(double r0) const {
    if (!(r0 > 0.0) || r0 > radio_.los_radius_m)
      throw DomainError("serving distance must lie in (0, los_radius_m]");
  }

  double los_exponent(int j, double r0) const {
    if (requesters_ == 0.0) return 0.0;
    const double alpha = radio_.pathloss_exp_los;
    const int shape = radio_.nakagami_los;
    const double base = radio_.eta_los * j * radio_.sinr_threshold * std::pow(r0, alpha) / shape;
    double sum = 0.0;
    for (const auto& level : radio_.directivity) {
      const double c = base * level.gain / radio_.boresight_gain();
      auto integrand = [&](double x) {
        if (x <= 0.0) return 0.0;
        return one_minus_inverse_power(c * std::pow(x, -alpha), shape) * x;
      };
      // c x^-alpha = 1 marks where 1 - (1 + u)^-N turns from ~1 to ~N u.
      sum += level.probability * integrate_with_knee(integrand, 0.0, radio_.los_radius_m,
                                                     std::pow(c, 1.0 / alpha), inner_,
                                                     "LoS interference");
    }
    return kTwoPi * requesters_ * sum;
  }

  double nlos_exponent(int j, double r0) const {
    if (requesters_ == 0.0) return 0.0;
    const double alpha = radio_.pathloss_exp_nlos;
    const int shape = radio_.nakagami_nlos;
    const double rl = radio_.los_radius_m;
    const double base = radio_.eta_los * j * radio_.sinr_threshold * radio_.intercept_nlos *
                        std::pow(r0, radio_.pathloss_exp_los) / (radio_.intercept_los * shape);
    double sum = 0.0;
    for (const auto& level : radio_.directivity) {
      const double c = base * level.gain / radio_.boresight_gain();
      auto h = [&](double x) { return one_minus_inverse_power(c * std::pow(x, -alpha), shape) * x; };
      const double knee = std::pow(c, 1.0 / alpha);
      double value = 0.0;
      if (outer_.nlos == NlosIntegration::ReciprocalMap) {
        auto mapped = [&](double t) {
          if (t <= 0.0) return 0.0;
          return h(rl / t) * rl / (t * t);
        };
        value = integrate_with_knee(mapped, 0.0, 1.0, rl / knee, inner_, "NLoS interference");
      } else {
        value = integrate_with_knee(h, rl, outer_.truncation_factor * rl, knee, inner_,
                                    "NLoS interference");
      }
      sum += level.probability * value;
    }
    return kTwoPi * requesters_ * sum;
  }

  double kernel(double r0) const {
    const int shape = radio_.nakagami_los;
    const double signal_scale = radio_.intercept_los * radio_.boresight_gain();
    double total = 0.0;
    for (int j = 1; j <= shape; ++j) {
      const double m =
          -radio_.eta_los * j * std::pow(r0, radio_.pathloss_exp_los) * radio_.sinr_threshold / signal_scale;
      const double exponent = m * radio_.noise - los_exponent(j, r0) - nlos_exponent(j, r0);
      const double sign = (j % 2 == 1) ? 1.0 : -1.0;
      total += sign * boost::math::binomial_coefficient<double>(shape, j) * std::exp(exponent);
    }
    return total;
  }

 private:
  LinearRadio radio_;
  double requesters_;
  QuadratureConfig outer_;
  QuadratureConfig inner_;
};

double log_ordered_density(int k, double r, double mean_workers, double los_radius_m) {
  const double f = 2.0 * r / (los_radius_m * los_radius_m);
  const double cdf = (r * r) / (los_radius_m * los_radius_m);
  // V^k e^{-V} f F^{k-1} / (k-1)! * e^{-V (F - 1)} = V^k f F^{k-1} e^{-V F} / (k-1)!
  return k * std::log(mean_workers) + std::log(f) + (k - 1) * std::log(cdf) -
         std::lgamma(static_cast<double>(k)) - mean_workers * cdf;
}

double averaged(const KernelModel& model, int outer_panels, auto&& weight) {
  const double rl = model.radio().los_radius_m;
  double total = 0.0;
  for (int p = 0; p < outer_panels; ++p) {
    const double a = rl * p / outer_panels;
    const double b = rl * (p + 1) / outer_panels;
    total += detail::integrate([&](double r0) { return model.kernel(r0) * weight(r0); }, a, b,
                               model.outer(), "success probability");
  }
  return std::clamp(total, 0.0, 1.0);
}

}  // namespace

double interference_exponent_los(int j, double r0, const CoverageQuery& q, const QuadratureConfig& cfg) {
  const KernelModel model(q, cfg);
  model.check_index(j);
  model.check_distance(r0);
  return model.los_exponent(j, r0);
}

double interference_exponent_nlos(int j, double r0, const CoverageQuery& q, const QuadratureConfig& cfg) {
  const KernelModel model(q, cfg);
  model.check_index(j);
  model.check_distance(r0);
  return model.nlos_exponent(j, r0);
}

double success_kernel(double r0, const CoverageQuery& q, const QuadratureConfig& cfg) {
  const KernelModel model(q, cfg);
  if (r0 < 0.0 || r0 > model.radio().los_radius_m)
    throw DomainError("serving distance must lie in [0, los_radius_m]");
  return model.kernel(r0);
}

double success_probability_random(const CoverageQuery& q, const QuadratureConfig& cfg) {
  if (!q.selection.is_random()) throw DomainError("success_probability_random needs Random selection");
  const KernelModel model(q, cfg);
  const double rl = model.radio().los_radius_m;
  return averaged(model, 1, [rl](double r0) { return 2.0 * r0 / (rl * rl); });
}

double ordered_distance_pdf(int k, double r, const DeploymentParams& deploy, double los_radius_m) {
  if (k < 1) throw DomainError("ordered_distance_pdf: k must be >= 1");
  if (!(los_radius_m > 0.0)) throw DomainError("ordered_distance_pdf: los_radius_m must be > 0");
  if (r < 0.0 || r > los_radius_m) throw DomainError("ordered_distance_pdf: r outside [0, R_L]");
  const double mean_workers = deploy.mean_los_workers(los_radius_m);
  if (r == 0.0 || mean_workers <= 0.0) return 0.0;
  return std::exp(log_ordered_density(k, r, mean_workers, los_radius_m));
}

double success_probability_ranked(int k, const CoverageQuery& q, const QuadratureConfig& cfg) {
  if (k < 1) throw DomainError("success_probability_ranked: k must be >= 1");
  if (q.selection.is_random() || q.selection.rank != k)
    throw DomainError("success_probability_ranked needs Ranked(k) selection");
  const KernelModel model(q, cfg);
  const double rl = model.radio().los_radius_m;
  const double mean_workers = q.deploy.mean_los_workers(rl);
  if (mean_workers <= 0.0) return 0.0;
  // The ordered density can be sharply peaked; panels keep the adaptive
  // rule from stepping over the peak on its first pass.
  return averaged(model, 8, [&](double r0) {
    return r0 <= 0.0 ? 0.0 : std::exp(log_ordered_density(k, r0, mean_workers, rl));
  });
}

double success_probability(const CoverageQuery& q, const QuadratureConfig& cfg) {
  return q.selection.is_random() ? success_probability_random(q, cfg)
                                 : success_probability_ranked(q.selection.rank, q, cfg);
}

double worker_availability_mass(int k, const DeploymentParams& deploy, double los_radius_m) {
  if (k < 1) throw DomainError("worker_availability_mass: k must be >= 1");
  const double mean_workers = deploy.mean_los_workers(los_radius_m);
  if (mean_workers <= 0.0) return 0.0;
  if (std::isinf(mean_workers)) return 1.0;
  // P(Poisson(V) >= k) equals the regularized lower incomplete gamma P(k, V).
  return boost::math::gamma_p(static_cast<double>(k), mean_workers);
}

namespace {

std::vector<double> ranked_table_on_grid(const KernelModel& model, int k_max, double mean_workers,
                                         int panels) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  const auto& abscissa = Rule::abscissa();
  const auto& weights = Rule::weights();
  const double rl = model.radio().los_radius_m;
  const double half = 0.5 * rl / panels;

  std::vector<double> table(static_cast<std::size_t>(k_max), 0.0);
  for (int p = 0; p < panels; ++p) {
    const double mid = rl * (p + 0.5) / panels;
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      for (const double side : {-1.0, 1.0}) {
        if (abscissa[i] == 0.0 && side > 0.0) continue;
        const double r0 = mid + side * half * abscissa[i];
        const double kv = model.kernel(r0) * weights[i] * half;
        for (int k = 1; k <= k_max; ++k)
          table[static_cast<std::size_t>(k - 1)] += kv * std::exp(log_ordered_density(k, r0, mean_workers, rl));
      }
    }
  }
  for (double& v : table) v = std::clamp(v, 0.0, 1.0);
  return table;
}

}  // namespace

std::vector<double> ranked_success_table(int k_max, const CoverageQuery& q, const QuadratureConfig& cfg) {
  if (k_max < 0) throw DomainError("ranked_success_table: k_max must be >= 0");
  if (k_max == 0) return {};
  const KernelModel model(q, cfg);
  const double mean_workers = q.deploy.mean_los_workers(model.radio().los_radius_m);
  if (mean_workers <= 0.0) return std::vector<double>(static_cast<std::size_t>(k_max), 0.0);

  constexpr int kMaxPanels = 1024;
  int panels = 16;
  std::vector<double> coarse = ranked_table_on_grid(model, k_max, mean_workers, panels);
  double gap = 0.0;
  while (panels < kMaxPanels) {
    panels *= 2;
    std::vector<double> fine = ranked_table_on_grid(model, k_max, mean_workers, panels);
    gap = 0.0;
    for (std::size_t i = 0; i < fine.size(); ++i) gap = std::max(gap, std::abs(fine[i] - coarse[i]));
    if (gap <= 10.0 * std::max(cfg.rel_tol, cfg.abs_tol)) return fine;
    coarse = std::move(fine);
  }
  throw NumericalError("ranked_success_table did not converge", gap);
}

}  // namespace eec
