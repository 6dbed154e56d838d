#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace berryosc {

// Real initial data (mu0, alpha0, beta0, gamma0, delta0, eps0, kappa0)
// selecting one member of the six-parameter oscillator solution family.
// Natural units hbar = m = omega = 1.  Requires mu0 != 0 and beta0 != 0.
struct InitialData {
  double mu0 = 1.0;
  double alpha0 = 0.0;
  double beta0 = 1.0;
  double gamma0 = 0.0;
  double delta0 = 0.0;
  double eps0 = 0.0;
  double kappa0 = 0.0;
};

inline void validate(const InitialData& d) {
  if (d.mu0 == 0.0) throw std::invalid_argument("InitialData: mu0 must be nonzero");
  if (d.beta0 == 0.0) throw std::invalid_argument("InitialData: beta0 must be nonzero");
}

// The seven parameter functions evaluated at one instant.
struct ParameterState {
  double t;
  double mu;
  double alpha;
  double beta;
  double gamma;
  double delta;
  double eps;
  double kappa;
};

// Shared denominator D(t) = beta0^4 sin^2 t + (2 alpha0 sin t + cos t)^2.
// Strictly positive: at sin t = 0 it equals cos^2 t = 1, elsewhere the
// first term is positive.
inline double denominator(const InitialData& d, double t) {
  const double s = std::sin(t);
  const double c = std::cos(t);
  const double b2 = d.beta0 * d.beta0;
  const double u = 2.0 * d.alpha0 * s + c;
  return b2 * b2 * s * s + u * u;
}

namespace detail {

// Wrap into [-pi, pi].
inline double wrap_angle(double a) {
  return std::remainder(a, 2.0 * std::numbers::pi);
}

// Continuous (unwrapped) polar angle of the curve t -> (x(t), y(t)) when the
// curve is a linear image of (cos t, sin t) under a matrix with positive
// eigenvalues and positive determinant.  Such a curve winds once per 2 pi and
// never turns antiparallel to (cos t, sin t), so the unwrapped angle deviates
// from t by strictly less than pi and is recovered pointwise -- no marching
// state between calls:
//   arg_c(t) = t + wrap(atan2(y, x) - t).
inline double continuous_angle(double y, double x, double t) {
  return t + wrap_angle(std::atan2(y, x) - t);
}

}  // namespace detail

// All seven parameter functions at time t.  gamma is the continuous branch:
// gamma(t) = gamma0 - (1/2) arg_c(2 alpha0 sin t + cos t, beta0^2 sin t),
// anchored so gamma(0) = gamma0 and continuous on all of R (the principal
// arctan would jump where 2 alpha0 sin t + cos t crosses zero).
inline ParameterState evaluate(const InitialData& d, double t) {
  validate(d);
  if (!std::isfinite(t)) throw std::invalid_argument("evaluate: t must be finite");

  const double s = std::sin(t);
  const double c = std::cos(t);
  const double s2 = std::sin(2.0 * t);
  const double c2 = std::cos(2.0 * t);
  const double b0 = d.beta0;
  const double a0 = d.alpha0;
  const double b0_2 = b0 * b0;
  const double b0_4 = b0_2 * b0_2;
  const double u = 2.0 * a0 * s + c;
  const double den = b0_4 * s * s + u * u;
  const double sqrt_den = std::sqrt(den);

  ParameterState p;
  p.t = t;
  p.mu = d.mu0 * sqrt_den;
  p.alpha = (a0 * c2 + s2 * (b0_4 + 4.0 * a0 * a0 - 1.0) / 4.0) / den;
  p.beta = b0 / sqrt_den;
  p.gamma = d.gamma0 - 0.5 * detail::continuous_angle(b0_2 * s, u, t);
  p.delta = (d.delta0 * u + d.eps0 * b0_2 * b0 * s) / den;
  p.eps = (d.eps0 * u - b0 * d.delta0 * s) / sqrt_den;
  p.kappa = d.kappa0 +
            s * s * (d.eps0 * b0_2 * (a0 * d.eps0 - b0 * d.delta0) - a0 * d.delta0 * d.delta0) / den +
            0.25 * s2 * (d.eps0 * d.eps0 * b0_2 - d.delta0 * d.delta0) / den;
  return p;
}

// Central finite-difference derivatives of alpha, delta, kappa and eps/beta,
// 4th-order five-point stencil with step h.  Kept numerical (rather than
// differentiating the closed expressions) so the phase-derivative route stays
// independent of the closed-form route it is checked against.
struct ParameterDerivatives {
  double dalpha_dt;
  double ddelta_dt;
  double dkappa_dt;
  double d_eps_over_beta_dt;
};

inline ParameterDerivatives parameter_derivatives(const InitialData& d, double t, double h = 1e-4) {
  if (!(h > 0.0)) throw std::invalid_argument("parameter_derivatives: h must be positive");
  const ParameterState m2 = evaluate(d, t - 2.0 * h);
  const ParameterState m1 = evaluate(d, t - h);
  const ParameterState p1 = evaluate(d, t + h);
  const ParameterState p2 = evaluate(d, t + 2.0 * h);
  const auto stencil = [h](double fm2, double fm1, double fp1, double fp2) {
    return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
  };
  return ParameterDerivatives{
      stencil(m2.alpha, m1.alpha, p1.alpha, p2.alpha),
      stencil(m2.delta, m1.delta, p1.delta, p2.delta),
      stencil(m2.kappa, m1.kappa, p1.kappa, p2.kappa),
      stencil(m2.eps / m2.beta, m1.eps / m1.beta, p1.eps / p1.beta, p2.eps / p2.beta),
  };
}

}  // namespace berryosc
