#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <gtest/gtest.h>

#include "fbmlab/bounds.hpp"

namespace fbmlab::bounds {
namespace {

const HurstParameter kRough(0.3), kBrownian(0.5), kSmooth(0.7);

TEST(PsiBig, Branches) {
  EXPECT_NEAR(psi_big(kRough, 2.0, 5), std::pow(2.0, -2.4), 1e-15);
  EXPECT_NEAR(psi_big(kBrownian, 4.0, 1), 1.0 / 16.0, 1e-15);
  EXPECT_NEAR(psi_big(kSmooth, 2.0, 3), std::pow(3.0, -0.4) * std::pow(2.0, -1.2) + std::pow(2.0, -1.6), 1e-15);
  EXPECT_NEAR(psi_big(kSmooth, 2.0, 3, 2.5), 2.5 * psi_big(kSmooth, 2.0, 3), 1e-15);
  EXPECT_THROW(psi_big(kRough, 0.0, 1), DomainError);
}

TEST(PsiDiscrete, ConvergesToZetaForRoughNoise) {
  // sum_{u<=m} u^{-s} + Euler-Maclaurin tail = zeta(s), s = 3/2 - H.
  const double s = 1.2;
  const std::size_t m = 200000;
  const double md = static_cast<double>(m);
  const double tail = std::pow(md, 1 - s) / (s - 1) - 0.5 * std::pow(md, -s) + s / 12.0 * std::pow(md, -s - 1);
  EXPECT_NEAR(psi_discrete(kRough, m, 1) + tail, boost::math::zeta(s), 1e-10);
}

TEST(PsiDiscrete, SmallCases) {
  EXPECT_DOUBLE_EQ(psi_discrete(kRough, 5, 5), 1.0);
  EXPECT_NEAR(psi_discrete(kSmooth, 2, 1), std::sqrt(2.0) + std::sqrt(std::pow(2.0, -1.2) + std::pow(2.0, -1.6)), 1e-14);
  EXPECT_THROW(psi_discrete(kRough, 3, 4), DomainError);
}

TEST(PsiContinuous, ClosedFormExample) {
  EXPECT_NEAR(psi_continuous(kRough, 2.0, 1), 1.0 + (std::pow(2.0, -0.2) - 1.0) / -0.2, 1e-14);
  EXPECT_NEAR(psi_continuous(kBrownian, 5.0, 2), 1.0 + std::log(4.0), 1e-14);
  // Upper limit below 1: the integrand is constant at Psi(1, k).
  EXPECT_NEAR(psi_continuous(kRough, 3.5, 4), 0.5, 1e-14);
  EXPECT_NEAR(psi_continuous(kRough, 3.5, 3), 1.0 + (std::pow(1.5, -0.2) - 1.0) / -0.2, 1e-14);
}

TEST(PsiContinuous, SmoothCaseMatchesTanhSinh) {
  boost::math::quadrature::tanh_sinh<double> ts;
  for (std::size_t k : {1u, 4u, 30u}) {
    const double t = 100.0;
    const double kd = static_cast<double>(k);
    auto f = [&](double u) { return std::sqrt(psi_big(kSmooth, std::max(u, 1.0), k)); };
    const double oracle = std::sqrt(psi_big(kSmooth, 1.0, k)) + ts.integrate(f, 1.0, t - kd + 1.0);
    EXPECT_NEAR(psi_continuous(kSmooth, t, k), oracle, 1e-9 * oracle) << "k=" << k;
  }
}

TEST(SumPsiSquared, ProfilesAgreeWithDirectSums) {
  for (const auto& h : {kRough, kSmooth}) {
    const auto p = sum_psi_squared(h, Horizon::Discrete, 40, par::Exec::Serial);
    double s = 0.0;
    for (std::size_t k = 1; k <= 40; ++k) {
      EXPECT_NEAR(p.psi[k - 1], psi_discrete(h, 40, k), 1e-12);
      s += p.psi[k - 1] * p.psi[k - 1];
      EXPECT_NEAR(p.psi_sq_cumsum[k - 1], s, 1e-10);
    }
    EXPECT_NEAR(p.sum_psi_sq, s, 1e-10);
    EXPECT_DOUBLE_EQ(p.growth_exponent, h.growth_exponent());
  }
}

TEST(SumPsiSquared, SerialAndParallelAreIdentical) {
  for (auto mode : {Horizon::Discrete, Horizon::Continuous}) {
    const auto s = sum_psi_squared(kSmooth, mode, 300, par::Exec::Serial);
    const auto p = sum_psi_squared(kSmooth, mode, 300, par::Exec::Parallel);
    EXPECT_EQ(s.psi, p.psi);
    EXPECT_EQ(s.sum_psi_sq, p.sum_psi_sq);
  }
}

TEST(SumPsiSquared, GrowthIsAtLeastLinear) {
  // Property: the squared sum grows at least like n and at most like n^{2H v 1} log n.
  for (const auto& h : {kRough, kSmooth}) {
    const double a = sum_psi_squared(h, Horizon::Discrete, 256).sum_psi_sq;
    const double b = sum_psi_squared(h, Horizon::Discrete, 512).sum_psi_sq;
    EXPECT_GT(b / a, 2.0);
    EXPECT_LT(std::log2(b / a), h.growth_exponent() + 0.3);
  }
}

TEST(ExpMomentBound, Values) {
  EXPECT_NEAR(moment_to_expmoment_bound(1.0, 1.0, 1.0), 7.38906, 1e-5);
  EXPECT_DOUBLE_EQ(moment_to_expmoment_bound(0.2, 1.0, 1.0), moment_to_expmoment_bound(1.0, 1.0, 1.0));
  EXPECT_DOUBLE_EQ(moment_to_expmoment_bound(3.0, 0.5, 0.0), 1.0);
  // Dominates the Gaussian moment generating function on a grid.
  for (double l = 0.0; l <= 4.0; l += 0.1) EXPECT_LE(std::exp(l * l / 2), moment_to_expmoment_bound(1.0, 1.0, l));
}

TEST(Envelopes, Formulas) {
  EXPECT_DOUBLE_EQ(occupation_envelope(kRough, 64, 1.0, 1.0, 0.0, Horizon::Discrete), 1.0);
  EXPECT_DOUBLE_EQ(concentration_envelope(kSmooth, 64, 1.0, 1.0, 0.0, Horizon::Discrete), 1.0);
  EXPECT_NEAR(concentration_envelope(kSmooth, 16, 2.0, 0.5, 3.0, Horizon::Discrete),
              std::exp(-9.0 / (4 * 0.5 * 4.0 * std::pow(16.0, 1.4))), 1e-15);
  EXPECT_NEAR(occupation_envelope(kRough, 16, 1.0, 1.0, 0.5, Horizon::Continuous), std::exp(-0.25 * 16 / 4), 1e-15);
  // Envelope is non-increasing in r.
  double prev = 1.0;
  for (double r = 0.0; r < 2.0; r += 0.1) {
    const double e = occupation_envelope(kSmooth, 32, 1.0, 1.0, r, Horizon::Discrete);
    EXPECT_LE(e, prev);
    prev = e;
  }
}

TEST(LemmaIntegral, MatchesTanhSinhAndPlateaus) {
  boost::math::quadrature::tanh_sinh<double> ts;
  const double alpha = 1.0, beta = 1.2, u = 37.0;
  const double oracle = ts.integrate([&](double v) { return std::exp(-alpha * (u - v)) * std::pow(v - 1, -beta); }, 2.0, u);
  const auto rep = check_lemma_integral(alpha, beta, {4.0, 8.0, 16.0, 37.0, 64.0, 128.0, 256.0});
  EXPECT_NEAR(rep.integral[3], oracle, 1e-9 * oracle);
  EXPECT_TRUE(rep.finite);
  EXPECT_LT(rep.last_octave_change, 0.05);
  // The ratio tends to 1/alpha.
  EXPECT_NEAR(rep.ratio.back(), 1.0 / alpha, 0.05);
}

}  // namespace
}  // namespace fbmlab::bounds
