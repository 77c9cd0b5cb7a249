#include <gtest/gtest.h>

#include <cmath>

#include "issglf/comparison.hpp"

using namespace issglf;

namespace {

MonotoneFn power_map(double k, double scale = 1.0) {
  return MonotoneFn([k, scale](double v) { return scale * std::pow(v, k); }, 0.0, 10.0, "pow", true);
}

}  // namespace

TEST(MonotoneFn, RejectsNonMonotoneMaps) {
  EXPECT_THROW(MonotoneFn([](double v) { return v * v; }, -1.0, 1.0, "square"), DomainError);
  EXPECT_THROW(MonotoneFn([](double v) { return v; }, 1.0, 1.0, "empty"), DomainError);
}

TEST(MonotoneFn, ClassKMustVanishAtOrigin) {
  EXPECT_THROW(MonotoneFn([](double v) { return v + 1.0; }, 0.0, 1.0, "shifted", true), DomainError);
  EXPECT_THROW(MonotoneFn([](double v) { return v; }, 0.5, 1.0, "offset", true), DomainError);
  EXPECT_NO_THROW(MonotoneFn([](double v) { return v; }, 0.0, 1.0, "id", true));
}

TEST(InvertMonotone, Examples) {
  EXPECT_NEAR(invert_monotone(power_map(3.0), 8.0, 0.0, 10.0, 1e-10), 2.0, 1e-10);
  const MonotoneFn id([](double v) { return v; }, 0.0, 1.0, "id", true);
  EXPECT_NEAR(invert_monotone(id, 0.7, 0.0, 1.0, 1e-12), 0.7, 1e-12);
  // v + v^3 = 2 has the exact root v = 1.
  const MonotoneFn cubic([](double v) { return v + v * v * v; }, 0.0, 10.0, "cubic", true);
  const double x = invert_monotone(cubic, 2.0, 0.0, 10.0, 1e-10);
  EXPECT_NEAR(x, 1.0, 1e-10);
  EXPECT_LE(std::abs(cubic(x) - 2.0), 1e-10);
}

TEST(InvertMonotone, OutsideBracketThrows) {
  EXPECT_THROW(invert_monotone(power_map(3.0), 2000.0, 0.0, 10.0, 1e-10), BracketError);
  EXPECT_THROW(invert_monotone(power_map(3.0), -1.0, 0.0, 10.0, 1e-10), BracketError);
  EXPECT_THROW(invert_monotone(power_map(3.0), 1.0, 0.0, 10.0, 0.0), DomainError);
}

TEST(InvertMonotone, RoundTripWithinTwiceTolerance) {
  const auto f = power_map(2.5, 0.3);
  for (double y : {0.01, 0.5, 3.0, 47.0, 90.0}) {
    const double x = invert_monotone(f, y, 0.0, 10.0, 1e-9);
    EXPECT_LE(std::abs(f(x) - y), 2e-9);
  }
}

TEST(GainFormula, Examples) {
  const auto id = power_map(1.0);
  EXPECT_EQ(iss_gain(power_map(2.0, 0.5), id, power_map(2.0, 2.0), 0.0), 0.0);
  EXPECT_NEAR(iss_gain(power_map(2.0, 0.5), id, power_map(2.0, 2.0), 1.0), 6.0, 1e-14);
  EXPECT_NEAR(iss_gain(power_map(3.0, 1.0 / 3.0), id, power_map(3.0, 2.0), 1.0), 22.0 / 3.0, 1e-14);
  EXPECT_THROW(iss_gain(id, id, id, -1.0), DomainError);
}

TEST(GainFormula, NondecreasingInArgument) {
  const auto set = parabolic_psi_set(2.0);
  const auto rho = power_map(1.5);
  double prev = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double g = iss_gain(set.psi1, rho, set.mu, 0.04 * i);
    EXPECT_GE(g, prev);
    prev = g;
  }
}

TEST(ParabolicPsiSet, Examples) {
  const auto p2 = parabolic_psi_set(2.0);
  EXPECT_NEAR(p2.psi1(1.0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(p2.psi2(1.0), 1.0 / 12.0, 1e-15);
  EXPECT_NEAR(p2.mu(1.0), 2.0, 1e-15);
  EXPECT_EQ(p2.psi1(0.0), 0.0);
  EXPECT_EQ(p2.psi2(0.0), 0.0);
  EXPECT_EQ(p2.mu(0.0), 0.0);
  EXPECT_NEAR(parabolic_psi_set(3.0).psi2(2.0), 0.5, 1e-15);
  EXPECT_THROW(parabolic_psi_set(1.0), DomainError);
}

TEST(ParabolicPsiSet, LowerSandwichBelowUpper) {
  for (double p : {1.1, 1.5, 2.0, 4.0, 7.0}) {
    const auto set = parabolic_psi_set(p);
    for (int i = 0; i <= 50; ++i) {
      const double s = 0.2 * i;
      EXPECT_LE(set.psi2(s), set.psi1(s));
    }
  }
}

TEST(KLBound, DecaysInTime) {
  const KLBound beta(power_map(1.0, 4.0), 0.5);
  EXPECT_DOUBLE_EQ(beta(1.0, 0.0), 4.0);
  EXPECT_LT(beta(1.0, 1.0), beta(1.0, 0.5));
  EXPECT_THROW(KLBound(power_map(1.0), 0.0), DomainError);
}
