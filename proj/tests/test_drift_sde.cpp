#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "fbmlab/drift.hpp"
#include "fbmlab/fbm_sampler.hpp"
#include "fbmlab/sde.hpp"

namespace fbmlab {
namespace {

KernelSpec volterra(double h) { return KernelSpec(HurstParameter(h), KernelFamily::Volterra); }

TEST(Drift, LinearConstants) {
  Eigen::MatrixXd a(2, 2);
  a << 2.0, 1.0, -1.0, 3.0;
  const auto d = DriftModel::linear(a, Eigen::VectorXd::Zero(2));
  EXPECT_NEAR(d.alpha(), 2.0, 1e-12);  // symmetric part is diag(2, 3)
  EXPECT_NEAR(d.lip(), a.jacobiSvd().singularValues()(0), 1e-12);
  RngStream rng(1, 0);
  const auto rep = validate_drift(d, 2000, 5.0, rng);
  EXPECT_TRUE(rep.pass());
  EXPECT_LE(rep.max_one_sided, -2.0 * (1 - 1e-9));
}

TEST(Drift, RejectsNonDissipativeMatrix) {
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 0.0, 0.0, -0.5;
  EXPECT_THROW(DriftModel::linear(a, Eigen::VectorXd::Zero(2)), DomainError);
}

TEST(Drift, PerturbedLinear) {
  const auto d = DriftModel::perturbed_linear(1.0, 0.4, 3);
  EXPECT_NEAR(d.alpha(), 0.6, 1e-12);
  EXPECT_NEAR(d.lip(), 1.4, 1e-12);
  RngStream rng(2, 0);
  EXPECT_TRUE(validate_drift(d, 2000, 10.0, rng).pass());
  EXPECT_THROW(DriftModel::perturbed_linear(1.0, 1.0, 1), DomainError);
}

TEST(Drift, ValidationCatchesFalseClaims) {
  // b(x) = -x declared with alpha = 2: the one-sided bound must fail.
  const auto d = DriftModel::custom([](auto x, auto out) { out[0] = -x[0]; }, 1, 2.0, 2.0);
  RngStream rng(3, 0);
  const auto rep = validate_drift(d, 200, 1.0, rng);
  EXPECT_FALSE(rep.one_sided_ok);
  EXPECT_TRUE(rep.lipschitz_ok);
}

TEST(Sde, ZeroNoiseIsExplicitEuler) {
  // y' = -2 y + 1, y0 = 3: Euler converges to the exact solution with O(dt) error.
  Eigen::MatrixXd a(1, 1);
  a << 2.0;
  Eigen::VectorXd c(1);
  c << 1.0;
  Eigen::VectorXd x0(1);
  x0 << 3.0;
  const SdeSpec spec{DriftModel::linear(a, c), Eigen::MatrixXd::Zero(1, 1), x0, volterra(0.5)};
  auto err_at = [&](std::size_t n) {
    const TimeGrid grid(1.0, n);
    const SamplePath y = integrate(spec, SamplePath(grid, 1));
    const double exact = 0.5 + 2.5 * std::exp(-2.0);
    return std::abs(y(n, 0) - exact);
  };
  const double e1 = err_at(100), e2 = err_at(200);
  EXPECT_LT(e1, 0.02);
  EXPECT_NEAR(e1 / e2, 2.0, 0.1);
}

TEST(Sde, NoiseEntersAdditively) {
  // With b = -x and a unit fBm increment at one step only, the response decays geometrically.
  const TimeGrid grid(1.0, 4);
  SamplePath b(grid, 1);
  for (std::size_t k = 1; k < b.size(); ++k) b(k, 0) = 1.0;
  const SdeSpec spec{DriftModel::linear(Eigen::MatrixXd::Identity(1, 1), Eigen::VectorXd::Zero(1)),
                     Eigen::MatrixXd::Identity(1, 1), Eigen::VectorXd::Zero(1), volterra(0.5)};
  const SamplePath y = integrate(spec, b);
  EXPECT_DOUBLE_EQ(y(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(y(2, 0), 0.75);
  EXPECT_DOUBLE_EQ(y(3, 0), 0.5625);
}

TEST(Sde, IsDeterministic) {
  const KernelSpec k = volterra(0.7);
  const SdeSpec spec{DriftModel::perturbed_linear(1.0, 0.3, 2), Eigen::MatrixXd::Identity(2, 2),
                     Eigen::VectorXd::Ones(2), k};
  RngStream rng(4, 4);
  const SamplePath b = sample_fbm(NoiseMethod::Cholesky, k, TimeGrid(4.0, 64), 2, rng);
  EXPECT_TRUE(integrate(spec, b) == integrate(spec, b));
}

TEST(Sde, NonFiniteStateReportsStep) {
  const auto bad = DriftModel::custom(
      [](auto x, auto out) { out[0] = x[0] > 0.5 ? std::numeric_limits<double>::quiet_NaN() : -x[0]; }, 1, 1.0, 1.0);
  const SdeSpec spec{bad, Eigen::MatrixXd::Identity(1, 1), Eigen::VectorXd::Zero(1), volterra(0.5)};
  SamplePath b(TimeGrid(1.0, 10), 1);
  for (std::size_t k = 3; k < b.size(); ++k) b(k, 0) = 1.0;
  try {
    integrate(spec, b);
    FAIL() << "expected IntegrationError";
  } catch (const IntegrationError& e) {
    EXPECT_EQ(e.step(), 4u);
  }
}

TEST(Sde, ValidatesShapes) {
  const SdeSpec spec{DriftModel::perturbed_linear(1.0, 0.0, 2), Eigen::MatrixXd::Identity(1, 1),
                     Eigen::VectorXd::Zero(2), volterra(0.5)};
  EXPECT_THROW(spec.validate(), DomainError);
}

}  // namespace
}  // namespace fbmlab
