#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "fbmlab/gaussian_oracle.hpp"

namespace fbmlab::oracle {
namespace {

LinearGaussianModel scalar(double a, double h) {
  return {Eigen::MatrixXd::Constant(1, 1, a), Eigen::MatrixXd::Identity(1, 1), h};
}

double fbm_cov(double h, double s, double t) {
  return 0.5 * (std::pow(s, 2 * h) + std::pow(t, 2 * h) - std::pow(std::abs(t - s), 2 * h));
}

// Cov(Y_s, Y_t) for dY = -Y dt + dB, Y_0 = 0, through Y_t = B_t - int_0^t e^{-(t-u)} B_u du
// and nested double-exponential quadrature split at the covariance kink.
double ou_cov_by_quadrature(double h, double s, double t) {
  boost::math::quadrature::tanh_sinh<double> ts(12);
  auto split = [&](auto&& f, double lo, double hi, double kink) {
    if (kink <= lo || kink >= hi) return ts.integrate(f, lo, hi);
    return ts.integrate(f, lo, kink) + ts.integrate(f, kink, hi);
  };
  const double r = fbm_cov(h, s, t);
  const double a = split([&](double v) { return std::exp(-(t - v)) * fbm_cov(h, s, v); }, 0.0, t, s);
  const double b = split([&](double u) { return std::exp(-(s - u)) * fbm_cov(h, u, t); }, 0.0, s, t);
  const double c = ts.integrate(
      [&](double u) {
        return std::exp(-(s - u)) *
               split([&](double v) { return std::exp(-(t - v)) * fbm_cov(h, u, v); }, 0.0, t, u);
      },
      0.0, s);
  return r - a - b + c;
}

TEST(GaussianOracle, BrownianTimeAverage) {
  // Var(int_0^1 W dt) = 1/3.
  EXPECT_NEAR(continuous_variance(scalar(0.0, 0.5), 1.0, 1), 1.0 / 3.0, 1e-12);
}

TEST(GaussianOracle, FbmTimeAverageClosedForm) {
  // int int R(s,t) ds dt over [0,1]^2 = 1 / (2H + 2).
  for (double h : {0.3, 0.7}) EXPECT_NEAR(continuous_variance(scalar(0.0, h), 1.0, 1), 1.0 / (2 * h + 2), 1e-10);
}

TEST(GaussianOracle, OrnsteinUhlenbeckClosedForm) {
  // H = 1/2: Cov(Y_s, Y_t) = (e^{-|t-s|} - e^{-(t+s)}) / 2.
  const std::size_t n = 10, b = 3;
  const double delta = 0.5;
  double v = 0.0;
  for (std::size_t i = b + 1; i <= b + n; ++i)
    for (std::size_t j = b + 1; j <= b + n; ++j) {
      const double s = delta * static_cast<double>(i), t = delta * static_cast<double>(j);
      v += 0.5 * (std::exp(-std::abs(t - s)) - std::exp(-(t + s)));
    }
  v /= static_cast<double>(n * n);
  EXPECT_NEAR(discrete_variance(scalar(1.0, 0.5), delta, n, b), v, 1e-11);
}

TEST(GaussianOracle, FractionalOuAgainstNestedQuadrature) {
  for (double h : {0.3, 0.7}) {
    const double c11 = ou_cov_by_quadrature(h, 1.0, 1.0);
    const double c12 = ou_cov_by_quadrature(h, 1.0, 2.0);
    const double c22 = ou_cov_by_quadrature(h, 2.0, 2.0);
    const double expected = (c11 + 2 * c12 + c22) / 4.0;
    EXPECT_NEAR(discrete_variance(scalar(1.0, h), 1.0, 2), expected, 1e-7 * expected) << "H=" << h;
  }
}

TEST(GaussianOracle, MarkovianScaling) {
  // H = 1/2, A = 1: T Var -> 1 (the long-run variance of OU).
  const auto m = scalar(1.0, 0.5);
  const double a = 256 * continuous_variance(m, 1.0, 256);
  EXPECT_NEAR(a, 1.0, 0.01);
}

TEST(GaussianOracle, LongMemoryScaling) {
  // H = 0.7: T^{2-2H} Var converges.
  const auto m = scalar(1.0, 0.7);
  const double a = std::pow(256.0, 0.6) * continuous_variance(m, 1.0, 256);
  const double b = std::pow(512.0, 0.6) * continuous_variance(m, 1.0, 512);
  EXPECT_NEAR(b / a, 1.0, 0.02);
}

TEST(GaussianOracle, SerialAndParallelAgree) {
  const auto m = scalar(1.0, 0.3);
  EXPECT_EQ(discrete_variance(m, 1.0, 64, 2, par::Exec::Serial), discrete_variance(m, 1.0, 64, 2, par::Exec::Parallel));
}

TEST(GaussianOracle, VarianceIsPositiveAndDecreasing) {
  const auto m = scalar(1.0, 0.7);
  double prev = INFINITY;
  for (std::size_t n : {4u, 16u, 64u}) {
    const double v = discrete_variance(m, 1.0, n);
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(GaussianOracle, RefusesNonLinearDrift) {
  const SdeSpec spec{DriftModel::perturbed_linear(1.0, 0.2, 1), Eigen::MatrixXd::Identity(1, 1),
                     Eigen::VectorXd::Zero(1), KernelSpec(HurstParameter(0.5), KernelFamily::Volterra)};
  EXPECT_THROW(model_from(spec), DomainError);
}

}  // namespace
}  // namespace fbmlab::oracle
