#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "eec/coverage.hpp"
#include "eec/errors.hpp"

using namespace eec;

namespace {

constexpr double kPi = std::numbers::pi;

double lin(double db) { return std::pow(10.0, db / 10.0); }

// 1 - (1 + u)^-n as ((1 + u)^n - 1) / (1 + u)^n with the numerator expanded
// binomially, so tiny u keeps full precision.
double saturation(double u, int n) {
  double numerator = 0.0, binom = 1.0, power = 1.0;
  for (int i = 1; i <= n; ++i) {
    binom = binom * (n - i + 1) / i;
    power *= u;
    numerator += binom * power;
  }
  return numerator / std::pow(1.0 + u, n);
}

CoverageQuery table1(double xi_db = 5.0, double rl = 100.0) {
  CoverageQuery q;
  q.radio.sinr_threshold_db = xi_db;
  q.radio.los_radius_m = rl;
  return q;
}

// Hand-rolled constants straight from the parameter definitions.
struct Oracle {
  explicit Oracle(const CoverageQuery& q) : q(q) {
    const auto& r = q.radio;
    xi = lin(r.sinr_threshold_db);
    nl = r.nakagami_los;
    nn = r.nakagami_nlos;
    double fact = 1.0;
    for (int i = 2; i <= nl; ++i) fact *= i;
    eta = nl * std::pow(fact, -1.0 / nl);
    const double big = lin(r.main_lobe_db), small = lin(r.side_lobe_db);
    const double p = r.beamwidth_rad / (2.0 * kPi);
    gains = {big * big, big * small, small * big, small * small};
    probs = {p * p, p * (1 - p), (1 - p) * p, (1 - p) * (1 - p)};
    boresight = big * big;
    cl = lin(r.intercept_los_db);
    cn = lin(r.intercept_nlos_db);
    noise = lin(r.noise_normalized_db);
  }

  double w_integrand(int j, double r0, double x) const {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double u = eta * gains[k] / boresight * j * xi * std::pow(r0 / x, q.radio.pathloss_exp_los) / nl;
      s += probs[k] * saturation(u, nl) * x;
    }
    return s;
  }

  double z_integrand(int j, double r0, double x) const {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double u = eta * gains[k] / boresight * j * xi * (cn / cl) *
                       std::pow(r0, q.radio.pathloss_exp_los) *
                       std::pow(x, -q.radio.pathloss_exp_nlos) / nn;
      s += probs[k] * saturation(u, nn) * x;
    }
    return s;
  }

  // Midpoint rule on [0, R_L].
  double w(int j, double r0, int panels) const {
    const double rl = q.radio.los_radius_m;
    const double h = rl / panels;
    double s = 0.0;
    for (int i = 0; i < panels; ++i) s += w_integrand(j, r0, (i + 0.5) * h);
    return 2.0 * kPi * q.deploy.requester_intensity_per_m2 * s * h;
  }

  // Midpoint rule in log x on [R_L, 1e4 R_L] plus the leading-order tail.
  double z(int j, double r0, int panels) const {
    const double rl = q.radio.los_radius_m;
    const double top = std::log(1e4);
    const double h = top / panels;
    double s = 0.0;
    for (int i = 0; i < panels; ++i) {
      const double x = rl * std::exp((i + 0.5) * h);
      s += z_integrand(j, r0, x) * x;
    }
    s *= h;
    const double xmax = rl * 1e4;
    const double a = q.radio.pathloss_exp_nlos;
    // x * N u ~ const * x^(1 - a) beyond xmax.
    s += z_integrand(j, r0, xmax) * xmax / (a - 2.0);
    return 2.0 * kPi * q.deploy.requester_intensity_per_m2 * s;
  }

  double kernel(double r0, int panels) const {
    double total = 0.0;
    double binom = 1.0;
    for (int j = 1; j <= nl; ++j) {
      binom = binom * (nl - j + 1) / j;
      const double m = -eta * j * std::pow(r0, q.radio.pathloss_exp_los) * xi / (cl * boresight);
      const double e = m * noise - w(j, r0, panels) - z(j, r0, panels);
      total += (j % 2 ? 1.0 : -1.0) * binom * std::exp(e);
    }
    return total;
  }

  CoverageQuery q;
  double xi, eta, boresight, cl, cn, noise;
  int nl, nn;
  std::vector<double> gains, probs;
};

double poisson_tail(int k, double v) {
  double pmf = std::exp(-v), below = 0.0;
  for (int i = 0; i < k; ++i) {
    below += pmf;
    pmf *= v / (i + 1);
  }
  return 1.0 - below;
}

}  // namespace

TEST(Selection, ParseAndPrint) {
  EXPECT_TRUE(parse_selection("random").is_random());
  EXPECT_EQ(parse_selection("ranked:3").rank, 3);
  EXPECT_EQ(parse_selection("ranked:12").to_string(), "ranked:12");
  EXPECT_THROW(parse_selection("ranked:0"), DomainError);
  EXPECT_THROW(parse_selection("ranked:x"), DomainError);
  EXPECT_THROW(parse_selection("nearest"), DomainError);
}

TEST(InterferenceExponent, EmptyFieldIsZero) {
  CoverageQuery q = table1();
  q.deploy.requester_intensity_per_m2 = 0.0;
  EXPECT_EQ(interference_exponent_los(1, 50.0, q), 0.0);
  EXPECT_EQ(interference_exponent_nlos(1, 50.0, q), 0.0);
}

TEST(InterferenceExponent, VanishesAsThresholdGoesToZero) {
  const CoverageQuery q = table1(-100.0);
  const CoverageQuery base = table1();
  EXPECT_LT(interference_exponent_los(1, 50.0, q), 1e-6 * interference_exponent_los(1, 50.0, base));
  EXPECT_LT(interference_exponent_nlos(1, 50.0, q), 1e-6 * interference_exponent_nlos(1, 50.0, base));
}

TEST(InterferenceExponent, LosMatchesRiemannSum) {
  const CoverageQuery q = table1();
  const Oracle o(q);
  for (int j = 1; j <= 3; ++j) {
    const double expected = o.w(j, 50.0, 1000000);
    EXPECT_NEAR(interference_exponent_los(j, 50.0, q) / expected, 1.0, 1e-6) << j;
  }
}

TEST(InterferenceExponent, NlosMatchesRiemannSum) {
  const CoverageQuery q = table1();
  const Oracle o(q);
  for (int j = 1; j <= 3; ++j) {
    const double expected = o.z(j, 50.0, 1000000);
    EXPECT_NEAR(interference_exponent_nlos(j, 50.0, q) / expected, 1.0, 1e-6) << j;
  }
}

TEST(InterferenceExponent, NlosIntegrandDecaysAsPowerLaw) {
  // x (1 - (1 + c x^-4)^-N) falls like x^-3 once c x^-4 is small, so the
  // integrand at 10 R_L is about 1e-3 of its value at R_L. That ratio is why
  // the default maps the tail onto a finite interval instead of truncating.
  const CoverageQuery q = table1();
  const Oracle o(q);
  const double rl = q.radio.los_radius_m;
  const double ratio = o.z_integrand(1, rl, 10.0 * rl) / o.z_integrand(1, rl, rl);
  EXPECT_NEAR(ratio, 1e-3, 1e-5);

  QuadratureConfig cut;
  cut.nlos = NlosIntegration::Truncated;
  const double mapped = interference_exponent_nlos(1, rl, q);
  const double truncated = interference_exponent_nlos(1, rl, q, cut);
  EXPECT_LT(truncated, mapped);
  EXPECT_NEAR(truncated / mapped, 0.99, 1e-3);  // 1 - 10^-2 of the x^-3 mass is kept
}

TEST(InterferenceExponent, RejectsBadArguments) {
  const CoverageQuery q = table1();
  EXPECT_THROW(interference_exponent_los(0, 50.0, q), DomainError);
  EXPECT_THROW(interference_exponent_los(4, 50.0, q), DomainError);
  EXPECT_THROW(interference_exponent_los(1, 0.0, q), DomainError);
  EXPECT_THROW(interference_exponent_nlos(1, 150.0, q), DomainError);
  CoverageQuery flat = q;
  flat.radio.pathloss_exp_nlos = 2.0;
  EXPECT_THROW(interference_exponent_nlos(1, 50.0, flat), DomainError);
}

TEST(SuccessKernel, MatchesDirectSum) {
  const CoverageQuery q = table1(0.0);
  const Oracle o(q);
  for (double r0 : {10.0, 50.0, 90.0}) {
    EXPECT_NEAR(success_kernel(r0, q), o.kernel(r0, 20000), 1e-7) << r0;
  }
}

TEST(SuccessProbability, RandomMatchesNestedOracle) {
  const CoverageQuery q = table1(0.0);
  const Oracle o(q);
  const double rl = q.radio.los_radius_m;
  const int outer = 200;
  double expected = 0.0;
  for (int i = 0; i < outer; ++i) {
    const double r0 = (i + 0.5) * rl / outer;
    expected += o.kernel(r0, 4000) * 2.0 * r0 / (rl * rl) * (rl / outer);
  }
  EXPECT_NEAR(success_probability_random(q), expected, 2e-5);
}

TEST(SuccessProbability, NoInterferenceNoNoise) {
  // With nothing but the signal left, the kernel is 1 - (1 - e^0)^N = 1.
  CoverageQuery q = table1(10.0);
  q.deploy.requester_intensity_per_m2 = 0.0;
  q.radio.noise_normalized_db = -400.0;
  EXPECT_NEAR(success_probability_random(q), 1.0, 1e-12);
}

TEST(SuccessProbability, ReferenceAnchors) {
  struct Anchor {
    double rl, xi, value;
  };
  for (const Anchor& a : {Anchor{100, -10, 0.9892}, Anchor{100, 0, 0.8989}, Anchor{100, 5, 0.7538},
                          Anchor{100, 10, 0.5335}, Anchor{300, -10, 0.8591}, Anchor{300, 0, 0.2710}}) {
    EXPECT_NEAR(success_probability_random(table1(a.xi, a.rl)), a.value, 0.005)
        << a.rl << " " << a.xi;
  }
  struct RankAnchor {
    double rl, xi, value;
  };
  for (const RankAnchor& a : {RankAnchor{100, 0, 0.9899}, RankAnchor{100, 5, 0.9688},
                              RankAnchor{100, 10, 0.9116}, RankAnchor{300, 10, 0.8595}}) {
    CoverageQuery q = table1(a.xi, a.rl);
    q.selection = Selection::ranked(1);
    EXPECT_NEAR(success_probability_ranked(1, q), a.value, 0.005)
        << a.rl << " " << a.xi;
  }
}

TEST(SuccessProbability, NonIncreasingInThreshold) {
  double previous = 1.0;
  for (double xi = -20.0; xi <= 15.0; xi += 1.0) {
    const double p = success_probability_random(table1(xi));
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, previous + 1e-12) << xi;
    previous = p;
  }
}

TEST(SuccessProbability, NonIncreasingInRequesterIntensity) {
  double previous = 1.0;
  for (double nu : {0.0, 1e-5, 1e-4, 1e-3}) {
    CoverageQuery q = table1();
    q.deploy.requester_intensity_per_m2 = nu;
    const double p = success_probability_random(q);
    EXPECT_LE(p, previous + 1e-12) << nu;
    previous = p;
  }
}

TEST(SuccessProbability, ToleranceHalvingIsStable) {
  const CoverageQuery q = table1(0.0);
  QuadratureConfig tight;
  tight.rel_tol = 0.5e-8;
  const double base = success_probability_random(q);
  EXPECT_NEAR(success_probability_random(q, tight) / base, 1.0, 1e-8);
}

TEST(SuccessProbability, DispatchOnSelection) {
  CoverageQuery q = table1();
  EXPECT_DOUBLE_EQ(success_probability(q), success_probability_random(q));
  q.selection = Selection::ranked(2);
  EXPECT_DOUBLE_EQ(success_probability(q), success_probability_ranked(2, q));
  EXPECT_THROW(success_probability_random(q), DomainError);
}

TEST(OrderedDistance, ZeroAtOriginForHigherRanks) {
  const DeploymentParams d;
  for (int k = 2; k <= 5; ++k) EXPECT_EQ(ordered_distance_pdf(k, 0.0, d, 100.0), 0.0);
  EXPECT_THROW(ordered_distance_pdf(0, 10.0, d, 100.0), DomainError);
}

TEST(OrderedDistance, IntegratesToPoissonTail) {
  const DeploymentParams d;
  const double rl = 100.0;
  const double v = 7.0 * kPi;
  for (int k = 1; k <= 5; ++k) {
    const int panels = 100000;
    double mass = 0.0;
    for (int i = 0; i < panels; ++i) mass += ordered_distance_pdf(k, (i + 0.5) * rl / panels, d, rl);
    mass *= rl / panels;
    EXPECT_NEAR(mass, poisson_tail(k, v), 1e-6) << k;
    EXPECT_NEAR(mass, 1.0, 1e-5) << k;  // P(N < 5) is 3.3e-6 at V = 7 pi
  }
}

TEST(WorkerAvailability, MatchesDirectSummation) {
  const DeploymentParams d;
  EXPECT_NEAR(worker_availability_mass(1, d, 100.0), 1.0 - std::exp(-7.0 * kPi), 1e-15);
  EXPECT_NEAR(worker_availability_mass(30, d, 100.0), poisson_tail(30, 7.0 * kPi), 1e-12);
  EXPECT_NEAR(worker_availability_mass(30, d, 100.0), 0.059980, 1e-6);
  DeploymentParams dense;
  dense.worker_intensity_per_m2 = 1.0;
  EXPECT_NEAR(worker_availability_mass(5, dense, 100.0), 1.0, 1e-15);
}

TEST(RankedSuccess, NonIncreasingInRankAndMatchesSingleRank) {
  const CoverageQuery q = table1(5.0);
  const std::vector<double> table = ranked_success_table(10, q);
  ASSERT_EQ(table.size(), 10u);
  for (int k = 1; k < 10; ++k) EXPECT_LE(table[k], table[k - 1] + 1e-12) << k;
  for (int k : {1, 4, 10}) {
    CoverageQuery single = q;
    single.selection = Selection::ranked(k);
    EXPECT_NEAR(table[k - 1], success_probability_ranked(k, single), 1e-6) << k;
  }
}

TEST(RankedSuccess, NeverExceedsAvailability) {
  CoverageQuery q = table1(-20.0, 300.0);
  for (int k : {1, 5, 20}) {
    q.selection = Selection::ranked(k);
    const double p = success_probability_ranked(k, q);
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, worker_availability_mass(k, q.deploy, 300.0) + 1e-9);
  }
}
