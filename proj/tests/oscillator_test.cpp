#include "berryosc/oscillator.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace berryosc {
namespace {

constexpr double kPi = std::numbers::pi;

const InitialData kTextbook{1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0};
const InitialData kFigure1{1.0, 0.0, 2.0 / 3.0, 0.0, 1.0, 0.0, 0.0};

TEST(Denominator, UnityAtZeroTime) {
  std::mt19937 rng(11);
  for (int k = 0; k < 10; ++k)
    EXPECT_DOUBLE_EQ(denominator(testing::moderate_random_data(rng), 0.0), 1.0);
}

TEST(Denominator, QuarterPiValue) {
  EXPECT_NEAR(denominator(kFigure1, kPi / 4.0), 97.0 / 162.0, 1e-15);
}

TEST(Denominator, UnitCircleCase) {
  for (double t = -7.0; t <= 7.0; t += 0.31)
    EXPECT_NEAR(denominator(kTextbook, t), 1.0, 1e-15);
}

TEST(Denominator, StrictlyPositiveEverywhere) {
  std::mt19937 rng(23);
  for (int k = 0; k < 5; ++k) {
    InitialData d = testing::moderate_random_data(rng);
    d.alpha0 *= 5.0;  // push toward strong squeezing
    d.beta0 = 0.4 + 0.2 * k;
    for (int i = 0; i < 10000; ++i) {
      const double t = -2.0 * kPi + 4.0 * kPi * i / 9999.0;
      EXPECT_GT(denominator(d, t), 0.0) << "t=" << t;
    }
  }
}

TEST(Evaluate, InitialDataRecoveredExactlyAtZero) {
  std::mt19937 rng(7);
  for (int k = 0; k < 20; ++k) {
    const InitialData d = testing::moderate_random_data(rng);
    const ParameterState p = evaluate(d, 0.0);
    EXPECT_EQ(p.mu, d.mu0);
    EXPECT_EQ(p.alpha, d.alpha0);
    EXPECT_EQ(p.beta, d.beta0);
    EXPECT_EQ(p.gamma, d.gamma0);
    EXPECT_EQ(p.delta, d.delta0);
    EXPECT_EQ(p.eps, d.eps0);
    EXPECT_EQ(p.kappa, d.kappa0);
  }
}

TEST(Evaluate, TextbookReducesToSeparableSolution) {
  for (double t = -9.0; t <= 9.0; t += 0.17) {
    const ParameterState p = evaluate(kTextbook, t);
    EXPECT_NEAR(p.mu, 1.0, 1e-14);
    EXPECT_NEAR(p.alpha, 0.0, 1e-14);
    EXPECT_NEAR(p.beta, 1.0, 1e-14);
    EXPECT_NEAR(p.gamma, -0.5 * t, 1e-13) << "t=" << t;
    EXPECT_NEAR(p.delta, 0.0, 1e-14);
    EXPECT_NEAR(p.eps, 0.0, 1e-14);
    EXPECT_NEAR(p.kappa, 0.0, 1e-14);
  }
}

TEST(Evaluate, QuarterPiFrozenValues) {
  const ParameterState p = evaluate(kFigure1, kPi / 4.0);
  EXPECT_NEAR(p.alpha, -65.0 / 194.0, 1e-14);
  EXPECT_NEAR(p.beta, (2.0 / 3.0) / std::sqrt(97.0 / 162.0), 1e-14);
  EXPECT_NEAR(p.mu, std::sqrt(97.0 / 162.0), 1e-14);
}

TEST(Evaluate, RejectsBadInputs) {
  EXPECT_THROW(evaluate(kTextbook, std::nan("")), std::invalid_argument);
  EXPECT_THROW(evaluate(kTextbook, INFINITY), std::invalid_argument);
  InitialData bad = kTextbook;
  bad.beta0 = 0.0;
  EXPECT_THROW(evaluate(bad, 1.0), std::invalid_argument);
  bad = kTextbook;
  bad.mu0 = 0.0;
  EXPECT_THROW(evaluate(bad, 1.0), std::invalid_argument);
}

TEST(Evaluate, BetaMuProductConstant) {
  std::mt19937 rng(99);
  for (int k = 0; k < 10; ++k) {
    const InitialData d = testing::moderate_random_data(rng);
    const double expected = d.beta0 * d.mu0;
    for (double t = 0.0; t <= 2.0 * kPi; t += 0.1) {
      const ParameterState p = evaluate(d, t);
      EXPECT_NEAR(p.beta * p.mu, expected, 1e-12 * std::abs(expected));
    }
  }
}

TEST(Evaluate, PeriodicityPattern) {
  std::mt19937 rng(3);
  const InitialData d = testing::moderate_random_data(rng);
  for (double t = 0.0; t <= 3.2; t += 0.07) {
    const ParameterState a = evaluate(d, t);
    const ParameterState b = evaluate(d, t + kPi);
    EXPECT_NEAR(b.mu, a.mu, 1e-12);
    EXPECT_NEAR(b.alpha, a.alpha, 1e-12);
    EXPECT_NEAR(b.beta, a.beta, 1e-12);
    EXPECT_NEAR(b.delta, -a.delta, 1e-12);
    EXPECT_NEAR(b.eps, -a.eps, 1e-12);
    EXPECT_NEAR(b.kappa, a.kappa, 1e-12);
    EXPECT_NEAR(denominator(d, t + kPi), denominator(d, t), 1e-12);
  }
}

TEST(Evaluate, GammaWindsMinusHalfPiPerPeriod) {
  std::mt19937 rng(5);
  for (int k = 0; k < 5; ++k) {
    const InitialData d = testing::moderate_random_data(rng);
    for (double t = -2.0; t <= 8.0; t += 0.23) {
      const double lhs = evaluate(d, t + kPi).gamma - evaluate(d, t).gamma;
      EXPECT_NEAR(lhs, -kPi / 2.0, 1e-12) << "t=" << t;
    }
  }
}

TEST(Evaluate, GammaContinuousInT) {
  InitialData d = kFigure1;
  d.alpha0 = 0.7;  // moves the principal-branch jump away from t = pi/2
  double prev = evaluate(d, 0.0).gamma;
  for (double t = 0.005; t <= 4.0 * kPi; t += 0.005) {
    const double cur = evaluate(d, t).gamma;
    EXPECT_LT(std::abs(cur - prev), 0.05) << "t=" << t;
    prev = cur;
  }
}

TEST(ParameterDerivatives, TextbookAllZero) {
  for (double t = 0.0; t <= 6.0; t += 0.5) {
    const ParameterDerivatives der = parameter_derivatives(kTextbook, t, 1e-3);
    EXPECT_NEAR(der.dalpha_dt, 0.0, 1e-10);
    EXPECT_NEAR(der.ddelta_dt, 0.0, 1e-10);
    EXPECT_NEAR(der.dkappa_dt, 0.0, 1e-10);
    EXPECT_NEAR(der.d_eps_over_beta_dt, 0.0, 1e-10);
  }
}

// Analytic oracle: alpha(t) = sin(2t) (beta0^4 - 1) / (4 D(t)) when
// alpha0 = 0, so dalpha/dt(0) = (beta0^4 - 1)/2 = -65/162 for beta0 = 2/3.
TEST(ParameterDerivatives, AlphaRateAtZeroMatchesAnalyticOracle) {
  const ParameterDerivatives der = parameter_derivatives(kFigure1, 0.0, 1e-3);
  EXPECT_NEAR(der.dalpha_dt, -65.0 / 162.0, 1e-9);
}

TEST(ParameterDerivatives, RichardsonSelfConsistency) {
  std::mt19937 rng(17);
  for (int k = 0; k < 5; ++k) {
    const InitialData d = testing::moderate_random_data(rng);
    for (double t : {0.4, 1.3, 2.9}) {
      const ParameterDerivatives a = parameter_derivatives(d, t, 1e-3);
      const ParameterDerivatives b = parameter_derivatives(d, t, 5e-4);
      EXPECT_NEAR(a.dalpha_dt, b.dalpha_dt, 1e-9);
      EXPECT_NEAR(a.ddelta_dt, b.ddelta_dt, 1e-9);
      EXPECT_NEAR(a.dkappa_dt, b.dkappa_dt, 1e-9);
      EXPECT_NEAR(a.d_eps_over_beta_dt, b.d_eps_over_beta_dt, 1e-9);
    }
  }
}

TEST(ParameterDerivatives, RejectsNonPositiveStep) {
  EXPECT_THROW(parameter_derivatives(kTextbook, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(parameter_derivatives(kTextbook, 1.0, -1e-4), std::invalid_argument);
}

}  // namespace
}  // namespace berryosc
