#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "berryosc/grid.hpp"
#include "berryosc/observables.hpp"
#include "berryosc/wavefunction.hpp"

namespace berryosc {

// Crank-Nicolson evolution settings.  The grid carries an implicit Dirichlet
// (zero) boundary; a run aborts if the state ever reaches the edges.
struct PropagationConfig {
  Grid grid;
  double dt;
  double t_final;

  PropagationConfig(const Grid& g, double dt_, double t_final_)
      : grid(g), dt(dt_), t_final(t_final_) {
    if (!(dt > 0.0)) throw std::invalid_argument("PropagationConfig: dt must be positive");
    if (!(t_final >= 0.0))
      throw std::invalid_argument("PropagationConfig: t_final must be non-negative");
  }
};

inline constexpr double kEdgeLeakTolerance = 1e-10;

namespace detail {

// One Crank-Nicolson stepper for i psi_t = H psi, H = -1/2 d2/dx2 + x^2/2
// discretized with second-order central differences (tridiagonal).  Each
// step solves (I + i dt H / 2) psi_new = (I - i dt H / 2) psi_old by the
// forward-elimination / back-substitution sweep; the system is diagonally
// dominant, so no pivoting is needed.  Exactly norm-preserving for the
// discretized H.  Holds scratch buffers: use one stepper per thread.
class CrankNicolsonStepper {
 public:
  CrankNicolsonStepper(const Grid& g, double dt) : grid_(g), dt_(dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("CrankNicolsonStepper: dt must be positive");
    const double dx = g.dx();
    const double half_dt = 0.5 * dt;
    off_ = std::complex<double>(0.0, half_dt * (-0.5 / (dx * dx)));
    diag_.resize(g.count);
    for (int i = 0; i < g.count; ++i) {
      const double x = g.x(i);
      const double h_ii = 1.0 / (dx * dx) + 0.5 * x * x;
      diag_[i] = std::complex<double>(1.0, half_dt * h_ii);
    }
    rhs_.resize(g.count);
    upper_.resize(g.count);
  }

  void step(std::vector<std::complex<double>>& v) {
    const int n = grid_.count;
    if ((int)v.size() != n) throw std::invalid_argument("step: state size mismatch");
    // rhs = (I - i dt H / 2) v; that matrix is the elementwise conjugate of
    // the left-hand one because H is real.
    for (int i = 0; i < n; ++i) {
      std::complex<double> r = std::conj(diag_[i]) * v[i];
      if (i > 0) r -= off_ * v[i - 1];
      if (i + 1 < n) r -= off_ * v[i + 1];
      rhs_[i] = r;
    }
    // Thomas sweep.
    upper_[0] = off_ / diag_[0];
    rhs_[0] /= diag_[0];
    for (int i = 1; i < n; ++i) {
      const std::complex<double> m = diag_[i] - off_ * upper_[i - 1];
      upper_[i] = off_ / m;
      rhs_[i] = (rhs_[i] - off_ * rhs_[i - 1]) / m;
    }
    v[n - 1] = rhs_[n - 1];
    for (int i = n - 2; i >= 0; --i) v[i] = rhs_[i] - upper_[i] * v[i + 1];

    if (std::abs(v[0]) > kEdgeLeakTolerance || std::abs(v[n - 1]) > kEdgeLeakTolerance)
      throw std::runtime_error("propagator: boundary leak, grid too small for this state");
  }

 private:
  Grid grid_;
  double dt_;
  std::complex<double> off_;
  std::vector<std::complex<double>> diag_;
  std::vector<std::complex<double>> rhs_;
  std::vector<std::complex<double>> upper_;
};

}  // namespace detail

// One Crank-Nicolson step of the state.
inline WaveSample step(const WaveSample& state, const PropagationConfig& config) {
  if (state.grid.count != config.grid.count)
    throw std::invalid_argument("step: state grid does not match config grid");
  detail::CrankNicolsonStepper stepper(config.grid, config.dt);
  WaveSample out = state;
  stepper.step(out.values);
  out.t = state.t + config.dt;
  return out;
}

// Evolve the analytic t = 0 state to t_final and return the maximum pointwise
// complex error against the analytic state there.  The global phase is not
// factored out: gamma(t) and kappa(t) must match too, which a modulus-only
// comparison would miss.
inline double propagate_and_compare(const InitialData& d, int n,
                                    const PropagationConfig& config) {
  WaveSample s = sample(d, n, config.grid, 0.0);
  const int full_steps = (int)(config.t_final / config.dt + 1e-9);
  detail::CrankNicolsonStepper stepper(config.grid, config.dt);
  for (int k = 0; k < full_steps; ++k) stepper.step(s.values);
  double t_end = full_steps * config.dt;
  const double rest = config.t_final - t_end;
  if (rest > 1e-12) {
    detail::CrankNicolsonStepper last(config.grid, rest);
    last.step(s.values);
    t_end = config.t_final;
  }
  const WaveSample exact = sample(d, n, config.grid, t_end);
  double worst = 0.0;
  for (int i = 0; i < config.grid.count; ++i)
    worst = std::max(worst, std::abs(s.values[i] - exact.values[i]));
  return worst;
}

// Periodic snapshot of a propagation run.
struct PropagationCheckpoint {
  double t;
  double max_error;             // vs the analytic state, global phase included
  double norm_squared;
  double invariant_expectation; // <E> on the propagated state
};

// Evolve and record roughly `checkpoints` evenly spaced snapshots (plus the
// final time).  <E> is computed on the numerical state alone, confirming the
// invariant without reference to the analytic solution.
inline std::vector<PropagationCheckpoint> propagate_with_checkpoints(
    const InitialData& d, int n, const PropagationConfig& config, int checkpoints = 20) {
  if (checkpoints < 1) throw std::invalid_argument("propagate_with_checkpoints: need >= 1");
  WaveSample s = sample(d, n, config.grid, 0.0);
  const int total = std::max(1, (int)std::lround(config.t_final / config.dt));
  const int stride = std::max(1, total / checkpoints);
  detail::CrankNicolsonStepper stepper(config.grid, config.dt);

  std::vector<PropagationCheckpoint> out;
  const auto record = [&](int step_index) {
    const double t = step_index * config.dt;
    s.t = t;
    const WaveSample exact = sample(d, n, config.grid, t);
    double worst = 0.0;
    for (int i = 0; i < config.grid.count; ++i)
      worst = std::max(worst, std::abs(s.values[i] - exact.values[i]));
    const WaveSample es = apply_invariant(d, s);
    std::vector<double> num(config.grid.count), den(config.grid.count);
    for (int i = 0; i < config.grid.count; ++i) {
      num[i] = std::real(std::conj(s.values[i]) * es.values[i]);
      den[i] = std::norm(s.values[i]);
    }
    const double nrm = integrate(den, config.grid);
    out.push_back(PropagationCheckpoint{t, worst, nrm, integrate(num, config.grid) / nrm});
  };

  record(0);
  for (int k = 1; k <= total; ++k) {
    stepper.step(s.values);
    if (k % stride == 0 || k == total) record(k);
  }
  return out;
}

}  // namespace berryosc
