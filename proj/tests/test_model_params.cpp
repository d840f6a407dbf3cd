#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "eec/errors.hpp"
#include "eec/model_params.hpp"

using namespace eec;

TEST(DbToLinear, KnownValues) {
  EXPECT_DOUBLE_EQ(db_to_linear(0.0), 1.0);
  EXPECT_NEAR(db_to_linear(10.0), 10.0, 1e-12);
  EXPECT_NEAR(db_to_linear(-61.4) / 7.2444e-7, 1.0, 1e-4);
}

TEST(AlzerEta, KnownValues) {
  EXPECT_DOUBLE_EQ(alzer_eta(1), 1.0);
  EXPECT_NEAR(alzer_eta(2), 2.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(alzer_eta(3), 3.0 / std::cbrt(6.0), 1e-12);
  EXPECT_NEAR(alzer_eta(3), 1.65096, 1e-5);
}

TEST(AlzerEta, StrictlyIncreasing) {
  for (int n = 1; n < 10; ++n) EXPECT_LT(alzer_eta(n), alzer_eta(n + 1)) << n;
}

TEST(AlzerEta, RejectsZeroShape) { EXPECT_THROW(alzer_eta(0), DomainError); }

TEST(Directivity, TableOneGainsAndProbabilities) {
  const auto d = directivity_distribution(RadioParams{});
  const double expected_gain[] = {10.0, 1.0, 1.0, 0.1};
  const double expected_prob[] = {1.0 / 64, 7.0 / 64, 7.0 / 64, 49.0 / 64};
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(d[i].gain, expected_gain[i], 1e-12 * expected_gain[i]);
    EXPECT_NEAR(d[i].probability, expected_prob[i], 1e-15);
  }
}

TEST(Directivity, EqualLobesGiveEqualGains) {
  RadioParams r;
  r.side_lobe_db = r.main_lobe_db;
  const auto d = directivity_distribution(r);
  for (const auto& level : d) EXPECT_NEAR(level.gain, d[0].gain, 1e-12);
}

TEST(Directivity, ProbabilitiesSumToOneAndGainsOrdered) {
  for (double theta = 0.05; theta < 2.0 * std::numbers::pi; theta += 0.37) {
    RadioParams r;
    r.beamwidth_rad = theta;
    const auto d = directivity_distribution(r);
    double total = 0.0;
    for (const auto& level : d) {
      EXPECT_GE(level.probability, 0.0);
      total += level.probability;
    }
    EXPECT_NEAR(total, 1.0, 1e-12) << theta;
    EXPECT_GE(d[0].gain, d[1].gain);
    EXPECT_DOUBLE_EQ(d[1].gain, d[2].gain);
    EXPECT_GE(d[2].gain, d[3].gain);
  }
}

TEST(Linearize, ConvertsOnce) {
  const LinearRadio lin = linearize(RadioParams{});
  EXPECT_NEAR(lin.sinr_threshold, db_to_linear(5.0), 1e-12);
  EXPECT_NEAR(lin.intercept_los, db_to_linear(-61.4), 1e-20);
  EXPECT_NEAR(lin.noise, db_to_linear(-114.0), 1e-25);
  EXPECT_NEAR(lin.boresight_gain(), 10.0, 1e-12);
  EXPECT_NEAR(lin.eta_los, alzer_eta(3), 1e-15);
}

TEST(RadioParams, RejectsBadValues) {
  auto expect_bad = [](auto mutate) {
    RadioParams r;
    mutate(r);
    EXPECT_THROW(r.validate(), DomainError);
  };
  expect_bad([](RadioParams& r) { r.los_radius_m = 0.0; });
  expect_bad([](RadioParams& r) { r.pathloss_exp_los = 1.5; });
  expect_bad([](RadioParams& r) { r.pathloss_exp_nlos = 1.9; });
  expect_bad([](RadioParams& r) { r.nakagami_los = 0; });
  expect_bad([](RadioParams& r) { r.nakagami_nlos = -1; });
  expect_bad([](RadioParams& r) { r.side_lobe_db = r.main_lobe_db + 1.0; });
  expect_bad([](RadioParams& r) { r.beamwidth_rad = 0.0; });
  expect_bad([](RadioParams& r) { r.beamwidth_rad = 2.0 * std::numbers::pi; });
  expect_bad([](RadioParams& r) { r.sinr_threshold_db = std::nan(""); });
  EXPECT_NO_THROW(RadioParams{}.validate());
}

TEST(OtherParams, RejectBadValues) {
  DeploymentParams d;
  d.worker_intensity_per_m2 = -1.0;
  EXPECT_THROW(d.validate(), DomainError);
  TaskParams t;
  t.segments = 0;
  EXPECT_THROW(t.validate(), DomainError);
  t = {};
  t.task_exec_rate_per_s = 0.0;
  EXPECT_THROW(t.validate(), DomainError);
  ReliabilityParams rel;
  rel.reliability_l = 0.0;
  EXPECT_THROW(rel.validate(), DomainError);
  rel = {};
  rel.spare_budget = -1;
  EXPECT_THROW(rel.validate(), DomainError);
}

TEST(Derived, MeanWorkersAndFailureRates) {
  const DeploymentParams d;
  EXPECT_NEAR(d.mean_los_workers(100.0), 7.0 * std::numbers::pi, 1e-12);
  TaskParams t;
  t.segments = 4;
  EXPECT_NEAR(t.segment_exec_rate(), 0.08, 1e-15);
  ReliabilityParams rel;
  rel.reliability_l = 2.0;
  EXPECT_NEAR(rel.failure_rate(0.02), 0.01, 1e-15);
  EXPECT_NEAR(rel.per_worker_failure_rate(0.02, 4), 0.0025, 1e-15);
}

TEST(Presets, TableOneByName) {
  const Preset p = preset_by_name("table1");
  EXPECT_EQ(p.radio.nakagami_los, 3);
  EXPECT_EQ(p.radio.nakagami_nlos, 2);
  EXPECT_DOUBLE_EQ(p.radio.los_radius_m, 100.0);
  EXPECT_DOUBLE_EQ(p.deploy.worker_intensity_per_m2, 7e-4);
  EXPECT_THROW(preset_by_name("nope"), DomainError);
}
