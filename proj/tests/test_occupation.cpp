#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "fbmlab/occupation.hpp"

namespace fbmlab::occupation {
namespace {

ExperimentConfig small_config(double h) {
  ExperimentConfig c;
  c.hurst = h;
  c.dt = 1.0 / 8.0;
  c.n_list = {8, 16};
  c.t_list = {8};
  c.r_list = {0.0, 0.5, 1.0, 2.0};
  c.r_units = RUnits::Sigma;
  c.replicas = 2000;
  c.centering_replicas = 2000;
  c.seed = 11;
  c.validate();
  return c;
}

TEST(Occupation, RawStatisticDiscreteAndContinuous) {
  ExperimentConfig c;
  c.dt = 0.5;
  c.delta = 1.0;
  c.burn_in = 1;
  SamplePath y(TimeGrid(4.0, 8), 1);
  for (std::size_t k = 0; k < y.size(); ++k) y(k, 0) = static_cast<double>(k);
  // Observations at t = 2, 3 (indices 4, 6) after one burn-in spacing.
  EXPECT_DOUBLE_EQ(raw_statistic(y, c, bounds::Horizon::Discrete, 2), 5.0);
  // (1/2) int_1^3 2t dt = 4 for the linear path y(t) = 2t.
  EXPECT_DOUBLE_EQ(raw_statistic(y, c, bounds::Horizon::Continuous, 2.0), 4.0);
  EXPECT_THROW(raw_statistic(y, c, bounds::Horizon::Discrete, 4), DomainError);
}

TEST(Occupation, SplitSampleBlocksAreDisjoint) {
  const auto c = small_config(0.5);
  const auto res = run_occupation_discrete(c);
  EXPECT_FALSE(res.sample.centering_block.overlaps(res.sample.evaluation_block));
  EXPECT_EQ(res.sample.evaluation_block.first, res.sample.centering_block.last());
  EXPECT_THROW(simulate(c, bounds::Horizon::Discrete, {8}, {0, 10}, {5, 10}), DomainError);
}

TEST(Occupation, TailsAgreeWithGaussianOracle) {
  // Brownian case, linear drift: exact Gaussian tails from the oracle.
  const auto res = run_occupation_discrete(small_config(0.5));
  for (const auto& r : res.rows) {
    ASSERT_TRUE(std::isfinite(r.oracle_tail));
    EXPECT_NEAR(r.estimate.value, r.oracle_tail, 4 * r.estimate.std_error + 0.01) << "n=" << r.horizon << " r=" << r.r;
  }
}

TEST(Occupation, ZeroThresholdGivesHalf) {
  const auto res = run_occupation_continuous(small_config(0.7));
  for (const auto& r : res.rows)
    if (r.r == 0.0) EXPECT_NEAR(r.estimate.value, 0.5, 4 * r.estimate.std_error + 0.01);
}

TEST(Occupation, TailsAreMonotoneAndBounded) {
  const auto res = run_occupation_discrete(small_config(0.3));
  for (std::size_t i = 1; i < res.rows.size(); ++i) {
    const auto& a = res.rows[i - 1];
    const auto& b = res.rows[i];
    if (a.horizon == b.horizon) EXPECT_LE(b.estimate.value, a.estimate.value);
  }
  for (const auto& r : res.rows) {
    EXPECT_LE(r.estimate.value, 1.0);
    EXPECT_GE(r.envelope, r.r == 0.0 ? 1.0 : 0.0);
  }
}

TEST(Occupation, FarTailIsCensoredWithUpperBound) {
  auto c = small_config(0.5);
  c.r_list = {8.0};
  const auto res = run_occupation_discrete(c);
  for (const auto& r : res.rows) {
    EXPECT_TRUE(r.censored);
    EXPECT_EQ(r.estimate.value, 0.0);
    EXPECT_NEAR(r.upper_bound, 1.0 - std::pow(0.05, 1.0 / 2000.0), 1e-12);
  }
}

TEST(Occupation, DiscreteAndContinuousCorrelationMatchesOrnsteinUhlenbeck) {
  auto c = small_config(0.5);
  c.n_list = {32};
  c.t_list = {32};
  c.replicas = 1000;
  c.centering_replicas = 1000;
  const auto d = run_occupation_discrete(c).sample.centered[0];
  const auto t = run_occupation_continuous(c).sample.centered[0];
  const double n = static_cast<double>(d.size());
  const double md = std::accumulate(d.begin(), d.end(), 0.0) / n, mt = std::accumulate(t.begin(), t.end(), 0.0) / n;
  double sdt = 0, sdd = 0, stt = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    sdt += (d[i] - md) * (t[i] - mt);
    sdd += (d[i] - md) * (d[i] - md);
    stt += (t[i] - mt) * (t[i] - mt);
  }
  // Exact correlation for the OU process started at 0 (n = T = 32, delta = 1): 0.95767.
  // Allowance: 5 sampling standard errors of (1 - rho^2)/sqrt(N) plus 0.007 for the dt = 1/8 scheme.
  const double rho = 0.95767;
  EXPECT_NEAR(sdt / std::sqrt(sdd * stt), rho, 5.0 * (1.0 - rho * rho) / std::sqrt(n) + 0.007);
}

TEST(Occupation, StandardErrorHalvesWhenReplicasQuadruple) {
  auto c = small_config(0.5);
  c.r_list = {0.0};
  c.n_list = {8};
  const auto a = run_occupation_discrete(c).rows[0].estimate.std_error;
  c.replicas *= 4;
  const auto b = run_occupation_discrete(c).rows[0].estimate.std_error;
  EXPECT_NEAR(b / a, 0.5, 0.1);
}

TEST(Occupation, SerialAndParallelAreBitIdentical) {
  const auto c = small_config(0.7);
  const auto s = simulate(c, bounds::Horizon::Discrete, c.n_list, {0, 300}, {300, 300}, par::Exec::Serial);
  const auto p = simulate(c, bounds::Horizon::Discrete, c.n_list, {0, 300}, {300, 300}, par::Exec::Parallel);
  EXPECT_EQ(s.centered, p.centered);
  EXPECT_EQ(s.centering, p.centering);
}

TEST(Occupation, ExponentFitReportsOracleAndMgfRows) {
  auto c = small_config(0.5);
  c.n_list = {4, 8, 16, 32};
  c.r_list = {0.5};
  c.lambda_list = {0.5};
  const auto res = run_occupation_discrete(c);
  const auto rows = fit_scaling_exponent(c, &res.sample);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].quantity, "oracle_variance");
  EXPECT_NEAR(rows[0].slope, -1.0, 0.15);
  EXPECT_DOUBLE_EQ(rows[0].target, -1.0);
  EXPECT_DOUBLE_EQ(rows[1].target, 1.0);
  EXPECT_GT(rows[1].min_ess, 100.0);
  c.n_list = {4, 8};
  EXPECT_THROW(fit_scaling_exponent(c, nullptr), DomainError);
}

TEST(Occupation, DominationZeroRowAlwaysPasses) {
  auto c = small_config(0.5);
  const double sd = oracle_sd(c, bounds::Horizon::Discrete, 8);
  const std::vector<double> z{0.0, sd * std::sqrt(8.0), 2 * sd * std::sqrt(8.0)};
  const auto rep = check_envelope_domination(c, 8, 16, z, {0, 500}, {500, 500}, {1000, 500});
  EXPECT_GT(rep.calibrated_c, 0.0);
  for (const auto& r : rep.rows)
    if (r.z == 0.0) {
      EXPECT_DOUBLE_EQ(r.envelope, 1.0);
      EXPECT_TRUE(r.dominated);
    }
  EXPECT_THROW(check_envelope_domination(c, 8, 16, z, {0, 500}, {400, 500}, {1000, 500}), DomainError);
}

}  // namespace
}  // namespace fbmlab::occupation
