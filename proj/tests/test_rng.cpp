#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "fbmlab/rng.hpp"

namespace fbmlab {
namespace {

TEST(Philox, KnownAnswer) {
  // Published known-answer vector for Philox4x32-10 with zero counter and key.
  const auto out = philox4x32({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out[0], 0x6627e8d5u);
  EXPECT_EQ(out[1], 0xe169c58du);
  EXPECT_EQ(out[2], 0xbc57ac4cu);
  EXPECT_EQ(out[3], 0x9b00dbd8u);
}

TEST(RngStream, SameKeySameDraws) {
  RngStream a(42, 7), b(42, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.normal(), b.normal());
}

TEST(RngStream, StreamsDiffer) {
  RngStream a(42, 7), b(42, 8), c(43, 7);
  int same_b = 0, same_c = 0;
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    same_b += x == b.uniform();
    same_c += x == c.uniform();
  }
  EXPECT_EQ(same_b, 0);
  EXPECT_EQ(same_c, 0);
}

TEST(RngStream, SeekReplaysDraws) {
  RngStream a(1, 2);
  for (int i = 0; i < 10; ++i) a.uniform();
  const auto pos = a.position();
  const double x = a.uniform();
  a.seek(pos);
  EXPECT_EQ(a.uniform(), x);
}

TEST(RngStream, UniformMoments) {
  RngStream r(3, 0);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
    s2 += u * u;
  }
  EXPECT_NEAR(s / n, 0.5, 5 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(s2 / n - 0.25, 1.0 / 12.0, 2e-3);
}

TEST(RngStream, NormalMoments) {
  RngStream r(5, 9);
  const int n = 200000;
  std::vector<double> z(n);
  r.fill_normal(z);
  double m1 = 0, m2 = 0, m4 = 0;
  for (double x : z) {
    m1 += x;
    m2 += x * x;
    m4 += x * x * x * x;
  }
  m1 /= n;
  m2 /= n;
  m4 /= n;
  EXPECT_NEAR(m1, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(m2, 1.0, 5.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(m4, 3.0, 5.0 * std::sqrt(96.0 / n));
}

TEST(RngStream, FillMatchesSequentialDraws) {
  RngStream a(11, 4), b(11, 4);
  std::vector<double> z(17);
  a.fill_normal(z);
  for (double x : z) EXPECT_EQ(x, b.normal());
}

}  // namespace
}  // namespace fbmlab
