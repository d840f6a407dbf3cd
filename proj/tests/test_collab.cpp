#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "eec/collab.hpp"
#include "eec/errors.hpp"

using namespace eec;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

BiasScenario scenario(const char* name, int n_max = 30) {
  BiasScenario s = bias_scenario(name, table1_preset());
  s.n_max = n_max;
  return s;
}

}  // namespace

TEST(CongestedWorkers, EndpointsAndMonotonicity) {
  const DeploymentParams d;
  EXPECT_EQ(congested_worker_intensity(0.0, d, 0.02), d.worker_intensity_per_m2);
  EXPECT_NEAR(congested_worker_intensity(1.0, d, 0.02), 8.597e-5, 1e-8);
  EXPECT_NEAR(congested_worker_intensity(1.0, d, 0.02),
              7e-4 * 0.02 / (0.02 + 1e-4 / 7e-4), 1e-18);
  double previous = kInf;
  for (double a = 0.0; a <= 1.0; a += 0.05) {
    const double v = congested_worker_intensity(a, d, 0.02);
    EXPECT_LT(v, previous);
    previous = v;
  }
  EXPECT_THROW(congested_worker_intensity(1.5, d, 0.02), DomainError);
}

TEST(MecDelay, ZeroLoadLevel) {
  MecParams m;
  EXPECT_NEAR(mec_delay(m, 100.0), 1.0 + 1.0 / (5.0 * 0.007), 1e-12);
  EXPECT_NEAR(mec_delay(m, 100.0), 29.57, 0.1);
}

TEST(MecDelay, PowerRatioHalvesComputation) {
  MecParams m;
  m.concurrent_requester_intensity = 1e-4;
  MecParams fast = m;
  fast.power_ratio = 10.0;
  const double slot = 1.0;
  EXPECT_NEAR((mec_delay(fast, 100.0) - slot) / (mec_delay(m, 100.0) - slot), 0.5, 1e-12);
}

TEST(MecDelay, LinearInLoad) {
  MecParams m;
  auto at = [&](double nu) {
    m.concurrent_requester_intensity = nu;
    return mec_delay(m, 100.0);
  };
  const double d0 = at(0.0), d1 = at(1e-4), d2 = at(2e-4);
  EXPECT_NEAR(d2 - d1, d1 - d0, 1e-9);
  EXPECT_NEAR(d1 - d0, 1e-4 * std::numbers::pi * 1e4 / (5.0 * 0.007), 1e-9);
  m = {};
  m.offload_success_prob = 0.5;
  EXPECT_NEAR(mec_delay(m, 100.0, 2.0), 4.0 + 1.0 / 0.035, 1e-12);
  m.offload_success_prob = 0.0;
  EXPECT_THROW(mec_delay(m, 100.0), DomainError);
}

TEST(CombinedDelay, EndpointsAreExact) {
  EXPECT_EQ(combined_delay(0.0, kInf, 29.5), 29.5);
  EXPECT_EQ(combined_delay(1.0, 17.25, kInf), 17.25);
  EXPECT_DOUBLE_EQ(combined_delay(0.25, 10.0, 30.0), 25.0);
}

TEST(AlphaGrid, StepsAndEndpoint) {
  const auto g = alpha_grid(0.1);
  ASSERT_EQ(g.size(), 11u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_EQ(g[3], 0.3);
  const auto odd = alpha_grid(0.3);
  EXPECT_EQ(odd.back(), 1.0);
  EXPECT_EQ(odd.size(), 5u);
}

TEST(EecDelay, SmallLoadApproachesUncongested) {
  const BiasScenario s = scenario("default");
  const EecDelay tiny = eec_delay_under_bias(1e-9, s);
  const EecDelay zero = eec_delay_under_bias(0.0, s);
  ASSERT_TRUE(tiny.servable);
  EXPECT_NEAR(tiny.delay_s / zero.delay_s, 1.0, 1e-6);
}

TEST(EecDelay, NondecreasingInAlpha) {
  const BiasScenario s = scenario("default");
  double previous = 0.0;
  for (double a : alpha_grid(0.1)) {
    const EecDelay d = eec_delay_under_bias(a, s);
    ASSERT_TRUE(d.servable) << a;
    EXPECT_GE(d.delay_s, previous - 1e-9) << a;
    EXPECT_EQ(static_cast<int>(d.delay_by_n.size()), s.n_max);
    previous = d.delay_s;
  }
}

TEST(EecDelay, FewerWorkersRaiseDelayAndLowerSegments) {
  const EecDelay base = eec_delay_under_bias(0.5, scenario("default", 50));
  const EecDelay sparse = eec_delay_under_bias(0.5, scenario("b", 50));
  EXPECT_GT(sparse.delay_s, base.delay_s);
  EXPECT_LT(sparse.optimal_n, base.optimal_n);
}

TEST(EecDelay, UnservableWithoutWorkers) {
  BiasScenario s = scenario("default");
  s.deploy.worker_intensity_per_m2 = 0.0;
  const EecDelay d = eec_delay_under_bias(0.5, s);
  EXPECT_FALSE(d.servable);
  EXPECT_EQ(d.optimal_n, 0);
  EXPECT_EQ(d.delay_s, kInf);
  EXPECT_FALSE(d.diagnostic.empty());
}

TEST(BiasPoint, BlendsBothSystems) {
  const BiasScenario s = scenario("default");
  const BiasPoint p = bias_point(0.4, s);
  EXPECT_NEAR(p.tau_alpha_s, 0.4 * p.tau_eec_s + 0.6 * p.tau_mec_s, 1e-12);
  MecParams mec = s.mec;
  mec.concurrent_requester_intensity = 0.6 * s.deploy.requester_intensity_per_m2;
  EXPECT_DOUBLE_EQ(p.tau_mec_s, mec_delay(mec, s.radio.los_radius_m, s.task.d2d_slot_s));
}

TEST(OptimalBias, SinglePointAndTies) {
  const BiasScenario s = scenario("default");
  const std::vector<double> one{0.7};
  const BiasSweep single = optimal_bias(one, s);
  ASSERT_EQ(single.points.size(), 1u);
  EXPECT_EQ(single.best.alpha, 0.7);

  // Duplicate grid points collapse onto one optimum.
  const std::vector<double> twice{0.3, 0.3};
  EXPECT_EQ(optimal_bias(twice, s).best.alpha, 0.3);
}

TEST(OptimalBias, ArgminOverGrid) {
  const BiasSweep sweep = optimal_bias(0.1, scenario("default"));
  ASSERT_EQ(sweep.points.size(), 11u);
  for (const BiasPoint& p : sweep.points) EXPECT_GE(p.tau_alpha_s, sweep.best.tau_alpha_s);
  for (const BiasPoint& p : sweep.points) {
    if (p.tau_alpha_s == sweep.best.tau_alpha_s) {
      EXPECT_GE(p.alpha, sweep.best.alpha);
    }
  }
}

TEST(OptimalBias, ScenarioDirections) {
  const double base = optimal_bias(0.1, scenario("default", 50)).best.alpha;
  const double fewer_workers = optimal_bias(0.1, scenario("b", 50)).best.alpha;
  const double fewer_requesters = optimal_bias(0.1, scenario("c", 50)).best.alpha;
  const double more_requesters = optimal_bias(0.1, scenario("d", 50)).best.alpha;
  EXPECT_LE(fewer_workers, base);
  EXPECT_LE(fewer_requesters, base);
  EXPECT_GE(more_requesters, base);
  EXPECT_GE(more_requesters, 0.6);
}

TEST(BiasScenarios, Definitions) {
  const Preset p = table1_preset();
  EXPECT_DOUBLE_EQ(scenario("a").task.task_exec_rate_per_s, 0.002);
  EXPECT_DOUBLE_EQ(scenario("a").mec.mec_task_rate_mu_f, 0.002);
  EXPECT_DOUBLE_EQ(scenario("b").deploy.worker_intensity_per_m2, p.deploy.worker_intensity_per_m2 / 4);
  EXPECT_DOUBLE_EQ(scenario("c").deploy.requester_intensity_per_m2,
                   p.deploy.requester_intensity_per_m2 / 4);
  EXPECT_DOUBLE_EQ(scenario("d").deploy.requester_intensity_per_m2,
                   p.deploy.requester_intensity_per_m2 * 4);
  EXPECT_THROW(bias_scenario("e", p), DomainError);
}
