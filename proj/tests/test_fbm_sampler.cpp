#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "fbmlab/fbm_sampler.hpp"
#include "fbmlab/stats.hpp"

namespace fbmlab {
namespace {

KernelSpec volterra(double h) { return KernelSpec(HurstParameter(h), KernelFamily::Volterra); }

double fbm_cov(double h, double s, double t) {
  return 0.5 * (std::pow(s, 2 * h) + std::pow(t, 2 * h) - std::pow(std::abs(t - s), 2 * h));
}

TEST(BrownianSampler, IncrementVariance) {
  const TimeGrid grid(2.0, 200);
  double s2 = 0.0;
  std::size_t count = 0;
  for (std::uint64_t r = 0; r < 200; ++r) {
    RngStream rng(1, r);
    const SamplePath p = sample_bm(grid, 2, rng);
    EXPECT_EQ(p(0, 0), 0.0);
    for (std::size_t k = 0; k < grid.n_steps(); ++k)
      for (std::size_t c = 0; c < 2; ++c) {
        const double d = p(k + 1, c) - p(k, c);
        s2 += d * d;
        ++count;
      }
  }
  const double var = s2 / static_cast<double>(count);
  EXPECT_NEAR(var / grid.dt(), 1.0, 5.0 * std::sqrt(2.0 / static_cast<double>(count)));
}

TEST(CholeskySampler, FactorReproducesFgnCovariance) {
  const double h = 0.7;
  const auto f = fgn_cholesky_factor(h, 32);
  const Eigen::MatrixXd c = f->lower * f->lower.transpose();
  for (Eigen::Index i = 0; i < 32; ++i)
    for (Eigen::Index j = 0; j < 32; ++j) {
      const double k = std::abs(static_cast<double>(i - j));
      const double g = 0.5 * (std::pow(k + 1, 2 * h) - 2 * std::pow(k, 2 * h) + std::pow(std::abs(k - 1), 2 * h));
      EXPECT_NEAR(c(i, j), g, 1e-12);
    }
  EXPECT_FALSE(f->jittered);
  EXPECT_EQ(fgn_cholesky_factor(h, 32).get(), f.get());
}

class SamplerCovariance : public ::testing::TestWithParam<std::tuple<double, NoiseMethod>> {};

TEST_P(SamplerCovariance, EmpiricalCovarianceMatchesFbm) {
  const auto [h, method] = GetParam();
  const KernelSpec k = volterra(h);
  const TimeGrid grid(1.0, 16);
  const std::size_t n = 4000;
  Eigen::MatrixXd x(n, 16);
  const FbmBatchSampler sampler(method, k, grid, 1);
  const auto paths = sampler.sample(3, 0, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 1; j <= 16; ++j) x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j - 1)) = paths[r](j, 0);
  const Eigen::MatrixXd m = x.transpose() * x / static_cast<double>(n);
  for (int i : {0, 7, 15})
    for (int j : {3, 15}) {
      const double s = grid.at(i + 1), t = grid.at(j + 1);
      // Product of two Gaussians has variance at most 2 sqrt(Var X Var Y)^2.
      const double se = std::sqrt(2.0 * std::pow(s, 2 * h) * std::pow(t, 2 * h) / static_cast<double>(n));
      EXPECT_NEAR(m(i, j), fbm_cov(h, s, t), std::max(5.0 * se, 2.0 * std::pow(grid.dt(), 2 * h)))
          << "s=" << s << " t=" << t;
    }
}

INSTANTIATE_TEST_SUITE_P(Methods, SamplerCovariance,
                         ::testing::Combine(::testing::Values(0.3, 0.5, 0.7),
                                            ::testing::Values(NoiseMethod::Cholesky, NoiseMethod::Volterra)));

TEST(FbmSampler, BatchMatchesSinglePathSamplers) {
  const KernelSpec k = volterra(0.3);
  const TimeGrid grid(1.0, 24);
  for (auto method : {NoiseMethod::Cholesky, NoiseMethod::Volterra}) {
    const FbmBatchSampler sampler(method, k, grid, 2);
    const auto batch = sampler.sample(9, 5, 3);
    for (std::size_t r = 0; r < 3; ++r) {
      RngStream rng(9, 5 + r);
      const SamplePath single = sample_fbm(method, k, grid, 2, rng);
      for (std::size_t i = 0; i < single.size(); ++i)
        for (std::size_t c = 0; c < 2; ++c) EXPECT_NEAR(batch[r](i, c), single(i, c), 1e-12);
    }
  }
}

TEST(FbmSampler, BatchDependsOnlyOnStreamIds) {
  const KernelSpec k = volterra(0.7);
  const TimeGrid grid(1.0, 20);
  const FbmBatchSampler sampler(NoiseMethod::Cholesky, k, grid, 1);
  const auto all = sampler.sample(4, 0, 10);
  const auto tail = sampler.sample(4, 6, 4);
  for (std::size_t r = 0; r < 4; ++r) EXPECT_TRUE(all[6 + r] == tail[r]);
}

TEST(FbmSampler, VolterraDrivingPathIsTheBrownianSample) {
  const KernelSpec k = volterra(0.5);
  const TimeGrid grid(1.0, 32);
  RngStream a(2, 0), b(2, 0);
  const CoupledPaths cp = sample_fbm_volterra(k, grid, 1, a);
  const SamplePath w = sample_bm(grid, 1, b);
  for (std::size_t i = 0; i < w.size(); ++i) {
    EXPECT_DOUBLE_EQ(cp.w(i, 0), w(i, 0));
    EXPECT_NEAR(cp.b(i, 0), w(i, 0), 1e-12);  // H = 1/2: the kernel is 1
  }
}

TEST(FbmSampler, WeightsSerialAndParallelAgree) {
  const KernelSpec k = volterra(0.3);
  const auto s = build_volterra_unit_weights(k, 24, par::Exec::Serial);
  const auto p = build_volterra_unit_weights(k, 24, par::Exec::Parallel);
  EXPECT_TRUE(s == p);
  // Row j-1 integrates K(j, .) over [0, j]; its squared sum approximates Var B_j = j^{2H}.
  const double row_sq = s.row(23).squaredNorm();
  EXPECT_NEAR(row_sq / std::pow(24.0, 0.6), 1.0, 0.05);
}

TEST(FbmSampler, CrossMethodMarginalsAgree) {
  const KernelSpec k = volterra(0.7);
  const TimeGrid grid(1.0, 32);
  const auto vol = FbmBatchSampler(NoiseMethod::Volterra, k, grid, 1).sample(8, 0, 4000);
  const auto cho = FbmBatchSampler(NoiseMethod::Cholesky, k, grid, 1).sample(8, 4000, 4000);
  std::vector<double> a, b;
  for (const auto& p : vol) a.push_back(p(32, 0));
  for (const auto& p : cho) b.push_back(p(32, 0));
  EXPECT_TRUE(ks_two_sample(a, b).pass);
}

TEST(FbmSampler, CholeskyRejectsHugeGrids) {
  const KernelSpec k = volterra(0.7);
  RngStream rng(1, 1);
  EXPECT_THROW(sample_fbm_cholesky(k, TimeGrid(1.0, kCholeskyMaxSteps + 1), 1, rng), DomainError);
}

TEST(TimeGrid, Basics) {
  const TimeGrid g(2.0, 8);
  EXPECT_DOUBLE_EQ(g.dt(), 0.25);
  EXPECT_EQ(g.n_points(), 9u);
  EXPECT_EQ(g.at(8), 2.0);
  EXPECT_THROW(TimeGrid(0.0, 4), DomainError);
  EXPECT_THROW(TimeGrid(1.0, 0), DomainError);
}

TEST(SamplePath, CsvRoundTripIsExact) {
  const KernelSpec k = volterra(0.3);
  RngStream rng(3, 3);
  const SamplePath p = sample_fbm(NoiseMethod::Cholesky, k, TimeGrid(1.0, 10), 2, rng);
  std::stringstream ss;
  p.write_csv(ss);
  EXPECT_EQ(ss.str().substr(0, 16), "t,comp_0,comp_1\n");
  EXPECT_TRUE(SamplePath::read_csv(ss) == p);
}

}  // namespace
}  // namespace fbmlab
