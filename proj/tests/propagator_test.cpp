#include "berryosc/propagator.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "berryosc/observables.hpp"

namespace berryosc {
namespace {

const InitialData kTextbook{1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0};
const InitialData kFigure1Norm{1.5, 0.0, 2.0 / 3.0, 0.0, 1.0, 0.0, 0.0};

double uniform_norm2(const WaveSample& s) {
  double acc = 0.0;
  for (const auto& v : s.values) acc += std::norm(v);
  return acc * s.grid.dx();
}

TEST(Step, PreservesNormPerStep) {
  const Grid g(-13.0, 13.0, 2601);
  const PropagationConfig pc(g, 1e-3, 1e-3);
  const WaveSample before = sample(kFigure1Norm, 2, g, 0.0);
  const WaveSample after = step(before, pc);
  EXPECT_NEAR(uniform_norm2(after), uniform_norm2(before), 1e-12);
  EXPECT_DOUBLE_EQ(after.t, before.t + pc.dt);
}

TEST(Step, EigenstatePicksUpPhaseFactor) {
  const Grid g(-10.0, 10.0, 2001);
  const double dt = 1e-3;
  const PropagationConfig pc(g, dt, dt);
  const WaveSample before = sample(kTextbook, 0, g, 0.0);
  const WaveSample after = step(before, pc);
  const std::complex<double> rot = std::polar(1.0, -0.5 * dt);
  for (int i = 0; i < g.count; ++i)
    EXPECT_LE(std::abs(after.values[i] - rot * before.values[i]), 1e-7);
}

TEST(Step, ZeroStateStaysZero) {
  const Grid g(-5.0, 5.0, 201);
  const PropagationConfig pc(g, 1e-3, 1e-3);
  WaveSample zero{g, 0.0, 0, std::vector<std::complex<double>>(g.count, 0.0)};
  const WaveSample after = step(zero, pc);
  for (const auto& v : after.values) EXPECT_EQ(v, std::complex<double>(0.0, 0.0));
}

TEST(Step, DetectsBoundaryLeak) {
  const Grid g(-5.0, 5.0, 201);
  const PropagationConfig pc(g, 1e-3, 1e-3);
  WaveSample state{g, 0.0, 0, std::vector<std::complex<double>>(g.count, 0.0)};
  state.values[0] = 1e-8;
  EXPECT_THROW(step(state, pc), std::runtime_error);
}

TEST(Step, RejectsMismatchedGrid) {
  const Grid g(-5.0, 5.0, 201);
  const PropagationConfig pc(Grid(-5.0, 5.0, 301), 1e-3, 1e-3);
  WaveSample state{g, 0.0, 0, std::vector<std::complex<double>>(g.count, 0.0)};
  EXPECT_THROW(step(state, pc), std::invalid_argument);
}

TEST(PropagationConfig, RejectsBadSettings) {
  const Grid g(-5.0, 5.0, 201);
  EXPECT_THROW(PropagationConfig(g, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(PropagationConfig(g, 1e-3, -1.0), std::invalid_argument);
}

TEST(PropagateAndCompare, TextbookGroundState) {
  const PropagationConfig pc(Grid(-12.0, 12.0, 2401), 5e-4, 1.0);
  EXPECT_LE(propagate_and_compare(kTextbook, 0, pc), 5e-5);
}

TEST(PropagateAndCompare, BreathingFirstExcitedState) {
  const PropagationConfig pc(Grid(-12.0, 12.0, 2401), 5e-4, 1.0);
  EXPECT_LE(propagate_and_compare(kFigure1Norm, 1, pc), 5e-4);
}

TEST(PropagateAndCompare, ZeroTimeIsExact) {
  const PropagationConfig pc(Grid(-12.0, 12.0, 1201), 5e-4, 0.0);
  EXPECT_LE(propagate_and_compare(kFigure1Norm, 0, pc), 1e-14);
}

TEST(PropagateAndCompare, SecondOrderConvergence) {
  const double coarse =
      propagate_and_compare(kTextbook, 0, PropagationConfig(Grid(-12.0, 12.0, 1201), 2e-3, 0.5));
  const double fine =
      propagate_and_compare(kTextbook, 0, PropagationConfig(Grid(-12.0, 12.0, 2401), 1e-3, 0.5));
  EXPECT_GE(coarse / fine, 3.5);
  EXPECT_LE(coarse / fine, 4.5);
}

TEST(PropagateWithCheckpoints, NormAndInvariantHold) {
  const PropagationConfig pc(Grid(-12.0, 12.0, 2401), 1e-3, 0.5);
  const auto checkpoints = propagate_with_checkpoints(kFigure1Norm, 1, pc, 10);
  ASSERT_GE(checkpoints.size(), 5u);
  EXPECT_DOUBLE_EQ(checkpoints.front().t, 0.0);
  const double norm0 = checkpoints.front().norm_squared;
  for (const auto& c : checkpoints) {
    EXPECT_LE(std::abs(c.norm_squared - norm0), 1e-10);
    EXPECT_LE(std::abs(c.invariant_expectation - 1.5), 1e-4);
  }
  EXPECT_NEAR(checkpoints.back().t, 0.5, 1e-12);
}

}  // namespace
}  // namespace berryosc
