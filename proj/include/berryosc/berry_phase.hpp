#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "berryosc/observables.hpp"
#include "berryosc/oscillator.hpp"

namespace berryosc {

enum class PhaseRoute { ode, closed_form, gamma_route };

// Time series theta_n(t_i) from one computation route, anchored at
// theta_n(0) = 0.
struct PhaseTrace {
  InitialData data;
  int n = 0;
  std::vector<double> times;
  std::vector<double> values;
  PhaseRoute route = PhaseRoute::ode;
};

// d theta_n / dt = -beta^-2 (eps^2 + n + 1/2) dalpha/dt + eps beta^-1 ddelta/dt
//                  - dkappa/dt,
// with the parameter derivatives taken by finite differences (step fd_step)
// so this route shares no algebra with the closed form it is checked against.
inline double phase_derivative(const InitialData& d, int n, double t, double fd_step = 1e-4) {
  const ParameterState p = evaluate(d, t);
  const ParameterDerivatives der = parameter_derivatives(d, t, fd_step);
  const double inv_b2 = 1.0 / (p.beta * p.beta);
  return -(p.eps * p.eps + n + 0.5) * inv_b2 * der.dalpha_dt +
         p.eps / p.beta * der.ddelta_dt - der.dkappa_dt;
}

// The parameter functions share the denominator D(t), which dips to
// D_min = beta0^4 / (1 + 4 alpha0^2) where 2 alpha0 sin t + cos t vanishes;
// near that dip they vary on a time scale ~ sqrt(D_min / D'').  Steps sized
// against that scale keep the fixed-step integrator and the difference
// stencils accurate for strongly squeezed data (small beta0, large alpha0)
// without penalizing the benign case.
inline double parameter_time_scale(const InitialData& d) {
  const double a2 = 4.0 * d.alpha0 * d.alpha0;
  const double b4 = d.beta0 * d.beta0 * d.beta0 * d.beta0;
  const double d_min = b4 / (1.0 + a2);
  return std::min(1.0, std::sqrt(d_min / (2.0 * (1.0 + a2 + b4))));
}

inline double recommended_ode_step(const InitialData& d) {
  return std::min(1e-3, parameter_time_scale(d) / 40.0);
}

inline double recommended_fd_step(const InitialData& d) {
  return std::min(1e-4, parameter_time_scale(d) / 50.0);
}

// Classical 4th-order one-step integration of theta' = phase_derivative from
// theta(0) = 0, reporting theta at each requested time.  Each gap between
// requested times is subdivided into equal substeps no longer than `step`.
// For a pure time integrand the two midpoint stages coincide, so one step
// costs three derivative evaluations, one shared with its neighbor.
inline PhaseTrace integrate_phase_ode(const InitialData& d, int n,
                                      std::span<const double> times, double step = 1e-3,
                                      double fd_step = 1e-4) {
  if (times.empty() || times[0] != 0.0)
    throw std::invalid_argument("integrate_phase_ode: times must start at 0");
  if (!(step > 0.0)) throw std::invalid_argument("integrate_phase_ode: step must be positive");
  constexpr double kMaxGap = 0.01 * (1.0 + 1e-9);
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("integrate_phase_ode: times must be strictly increasing");
    if (times[i] - times[i - 1] > kMaxGap)
      throw std::invalid_argument("integrate_phase_ode: time spacing exceeds 0.01");
  }

  PhaseTrace trace{d, n, {times.begin(), times.end()}, {}, PhaseRoute::ode};
  trace.values.reserve(times.size());
  trace.values.push_back(0.0);

  double theta = 0.0;
  double f_left = phase_derivative(d, n, 0.0, fd_step);
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double gap = times[i] - times[i - 1];
    const int substeps = std::max(1, (int)std::ceil(gap / step - 1e-12));
    const double h = gap / substeps;
    for (int k = 0; k < substeps; ++k) {
      const double t0 = times[i - 1] + k * h;
      const double k1 = f_left;
      const double k23 = phase_derivative(d, n, t0 + 0.5 * h, fd_step);
      const double k4 = phase_derivative(d, n, t0 + h, fd_step);
      theta += h / 6.0 * (k1 + 4.0 * k23 + k4);
      f_left = k4;
    }
    trace.values.push_back(theta);
  }
  return trace;
}

namespace detail {

// Continuous branch of arctan[(2 alpha0 + (4 alpha0^2 + beta0^4) tan t) / beta0^2]:
// the argument equals the angle of the curve
//   t -> (beta0^2 cos t, 2 alpha0 cos t + (4 alpha0^2 + beta0^4) sin t),
// a positively-oriented ellipse-like image of the unit circle, so the
// unwrapped angle gains pi per period pi of t and continuous_angle applies.
inline double continuous_arctan_term(const InitialData& d, double t) {
  const double a0 = d.alpha0;
  const double b2 = d.beta0 * d.beta0;
  const double k = 4.0 * a0 * a0 + b2 * b2;
  return continuous_angle(2.0 * a0 * std::cos(t) + k * std::sin(t), b2 * std::cos(t), t);
}

}  // namespace detail

// The three t-dependent pieces the closed form is assembled from, each
// reduced by its 4 beta0^2 prefactor:
//   constant_term = (eps/beta)^2 alpha - eps delta / beta + kappa,
//   free_integral = antiderivative of alpha d/dt (eps/beta)^2 - delta d/dt (eps/beta),
//   n_integral    = integral_0^t beta^-2 (dalpha/dt) dt  (anchored to 0 at t = 0).
// free_integral carries the printed constant of integration (its value at 0
// is not zero); consumers difference it against t = 0.
struct ClosedFormIngredients {
  double constant_term;
  double free_integral;
  double n_integral;
};

inline ClosedFormIngredients closed_form_ingredients(const InitialData& d, double t) {
  validate(d);
  const double b0 = d.beta0;
  const double b2 = b0 * b0;
  const double cross = 2.0 * d.alpha0 * d.eps0 - b0 * d.delta0;
  const double c2 = std::cos(2.0 * t);
  const double s2 = std::sin(2.0 * t);
  const double quarter_inv_b2 = 1.0 / (4.0 * b2);

  ClosedFormIngredients out;
  out.constant_term = (2.0 * b0 * (2.0 * b0 * d.kappa0 - d.delta0 * d.eps0) +
                       2.0 * d.eps0 * cross * c2 + (cross * cross - d.eps0 * d.eps0) * s2) *
                      quarter_inv_b2;
  out.free_integral = (2.0 * t * (cross * cross + d.eps0 * d.eps0) +
                       2.0 * d.eps0 * cross * c2 + (cross * cross - d.eps0 * d.eps0) * s2) *
                      quarter_inv_b2;
  out.n_integral = -t * (4.0 * d.alpha0 * d.alpha0 + b2 * b2 + 1.0) / (2.0 * b2) +
                   detail::continuous_arctan_term(d, t) - detail::continuous_arctan_term(d, 0.0);
  return out;
}

// Closed form of the phase,
//   theta_n(t) = -(n + 1/2) [ arctan_c((2 alpha0 + (4 alpha0^2 + beta0^4) tan t)
//                             / beta0^2) - arctan(2 alpha0 / beta0^2)
//                             - t (4 alpha0^2 + beta0^4 + 1) / (2 beta0^2) ]
//                + t ((2 alpha0 eps0 - beta0 delta0)^2 + eps0^2) / (2 beta0^2),
// with the continuous-branch arctan (see above), so theta_n(0) = 0 and the
// trace is continuous through the tan t poles at odd multiples of pi/2.
inline double closed_form_phase(const InitialData& d, int n, double t) {
  validate(d);
  const double b2 = d.beta0 * d.beta0;
  const double cross = 2.0 * d.alpha0 * d.eps0 - d.beta0 * d.delta0;
  // the subtracted anchor arctan(2 alpha0 / beta0^2) is the t = 0 value of
  // the continuous arctan term; differencing the same routine keeps the
  // anchor exact to the last bit
  const double bracket = detail::continuous_arctan_term(d, t) -
                         detail::continuous_arctan_term(d, 0.0) -
                         t * (4.0 * d.alpha0 * d.alpha0 + b2 * b2 + 1.0) / (2.0 * b2);
  return -(n + 0.5) * bracket + t * (cross * cross + d.eps0 * d.eps0) / (2.0 * b2);
}

// Alternative route: theta_n(t) = (2n+1)(gamma(t) - gamma0) + <H> t, with the
// continuous-branch gamma and the closed-form energy.  Subtracting gamma0
// anchors theta_n(0) = 0 so all routes are directly comparable.
inline double gamma_route_phase(const InitialData& d, int n, double t) {
  const ParameterState p = evaluate(d, t);
  return (2.0 * n + 1.0) * (p.gamma - d.gamma0) + hamiltonian_expectation_closed(d, n) * t;
}

}  // namespace berryosc
