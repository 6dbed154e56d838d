#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "berryosc/grid.hpp"
#include "berryosc/wavefunction.hpp"

namespace berryosc {

// Composite Simpson quadrature of samples over [x_min, x_max].
// Requires an odd sample count matching the grid.
inline double integrate(std::span<const double> values, const Grid& g) {
  if ((int)values.size() != g.count)
    throw std::invalid_argument("integrate: value count does not match grid");
  if (g.count % 2 == 0)
    throw std::invalid_argument("integrate: Simpson rule needs an odd point count");
  double odd = 0.0;
  double even = 0.0;
  for (int i = 1; i + 1 < g.count; i += 2) odd += values[i];
  for (int i = 2; i + 1 < g.count; i += 2) even += values[i];
  return g.dx() / 3.0 * (values[0] + values[g.count - 1] + 4.0 * odd + 2.0 * even);
}

namespace detail {

// Simpson value plus a cheap error estimate: Richardson against the
// stride-2 Simpson rule when the point count allows it, otherwise the
// Simpson-trapezoid gap (a coarse upper bound).
inline std::pair<double, double> integrate_with_estimate(std::span<const double> values,
                                                         const Grid& g) {
  const double fine = integrate(values, g);
  if ((g.count - 1) % 4 == 0) {
    double odd = 0.0;
    double even = 0.0;
    for (int i = 2; i + 2 < g.count; i += 4) odd += values[i];
    for (int i = 4; i + 2 < g.count; i += 4) even += values[i];
    const double coarse =
        2.0 * g.dx() / 3.0 * (values[0] + values[g.count - 1] + 4.0 * odd + 2.0 * even);
    return {fine, std::abs(fine - coarse) / 15.0};
  }
  double trap = 0.5 * (values[0] + values[g.count - 1]);
  for (int i = 1; i + 1 < g.count; ++i) trap += values[i];
  trap *= g.dx();
  return {fine, std::abs(fine - trap)};
}

// 4th-order central first and second derivatives on interior points
// (two points at each edge are left zero; the callers integrate functions
// that vanish there anyway).
inline void derivatives_4th(std::span<const std::complex<double>> f, double dx,
                            std::vector<std::complex<double>>& d1,
                            std::vector<std::complex<double>>& d2) {
  const int n = (int)f.size();
  d1.assign(n, 0.0);
  d2.assign(n, 0.0);
  const double c1 = 1.0 / (12.0 * dx);
  const double c2 = 1.0 / (12.0 * dx * dx);
  for (int i = 2; i + 2 < n; ++i) {
    d1[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * c1;
    d2[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) * c2;
  }
}

}  // namespace detail

// One expectation value with its quadrature error estimate.
struct ExpectationReport {
  double t;
  int n;
  double value;
  double quadrature_error_estimate;
};

// Apply the quadratic invariant
//   E = (1/2) [ (p - 2 alpha x - delta)^2 / beta^2 + (beta x + eps)^2 ],
// p = -i d/dx, to the sampled state.  The squared factor is expanded
// algebraically before discretization,
//   (p - W)^2 psi = -psi'' + 2i W psi' + 2i alpha psi + W^2 psi,  W = 2 alpha x + delta,
// and the derivatives are 4th-order central differences, so no squared
// stencil inflates the truncation error.
inline WaveSample apply_invariant(const InitialData& d, const WaveSample& s) {
  const Grid& g = s.grid;
  if (g.count < 5) throw std::invalid_argument("apply_invariant: need >= 5 grid points");
  if ((int)s.values.size() != g.count)
    throw std::invalid_argument("apply_invariant: sample size mismatch");
  const ParameterState p = evaluate(d, s.t);

  std::vector<std::complex<double>> d1, d2;
  detail::derivatives_4th(s.values, g.dx(), d1, d2);

  WaveSample out{g, s.t, s.n, {}};
  out.values.assign(g.count, 0.0);
  const double inv_b2 = 1.0 / (p.beta * p.beta);
  for (int i = 2; i + 2 < g.count; ++i) {
    const double x = g.x(i);
    const double w = 2.0 * p.alpha * x + p.delta;
    const std::complex<double> sq =
        -d2[i] + std::complex<double>(0.0, 2.0) * (w * d1[i] + p.alpha * s.values[i]) +
        w * w * s.values[i];
    const double xi = p.beta * x + p.eps;
    out.values[i] = 0.5 * (sq * inv_b2 + xi * xi * s.values[i]);
  }
  return out;
}

// Relative L2 residual of the eigenproblem E psi = (n + 1/2) psi over the
// interior points where the 4th-order stencil is defined.
inline double invariant_eigen_residual(const InitialData& d, const WaveSample& s) {
  const WaveSample es = apply_invariant(d, s);
  const double ev = s.n + 0.5;
  double num = 0.0;
  double den = 0.0;
  for (int i = 2; i + 2 < s.grid.count; ++i) {
    num += std::norm(es.values[i] - ev * s.values[i]);
    den += std::norm(s.values[i]);
  }
  return std::sqrt(num / den);
}

// <psi|E|psi> / <psi|psi> by Simpson quadrature; equals n + 1/2 at every t.
inline ExpectationReport invariant_expectation(const InitialData& d, int n, const Grid& g,
                                               double t) {
  const WaveSample s = sample(d, n, g, t);
  const WaveSample es = apply_invariant(d, s);
  std::vector<double> num(g.count), den(g.count);
  for (int i = 0; i < g.count; ++i) {
    num[i] = std::real(std::conj(s.values[i]) * es.values[i]);
    den[i] = std::norm(s.values[i]);
  }
  const auto [nv, ne] = detail::integrate_with_estimate(num, g);
  const auto [dv, de] = detail::integrate_with_estimate(den, g);
  const double value = nv / dv;
  const double est = std::abs(ne / dv) + std::abs(value * de / dv);
  return ExpectationReport{t, n, value, est};
}

// <H> = (1/2)(<p^2> + <x^2>) by quadrature with 4th-order differences for
// p^2; independent of t for every family member.
inline ExpectationReport hamiltonian_expectation(const InitialData& d, int n, const Grid& g,
                                                 double t) {
  const WaveSample s = sample(d, n, g, t);
  std::vector<std::complex<double>> d1, d2;
  detail::derivatives_4th(s.values, g.dx(), d1, d2);
  std::vector<double> num(g.count), den(g.count);
  for (int i = 0; i < g.count; ++i) {
    const double x = g.x(i);
    const std::complex<double> h =
        (i >= 2 && i + 2 < g.count) ? 0.5 * (-d2[i] + x * x * s.values[i])
                                    : std::complex<double>(0.0);
    num[i] = std::real(std::conj(s.values[i]) * h);
    den[i] = std::norm(s.values[i]);
  }
  const auto [nv, ne] = detail::integrate_with_estimate(num, g);
  const auto [dv, de] = detail::integrate_with_estimate(den, g);
  const double value = nv / dv;
  const double est = std::abs(ne / dv) + std::abs(value * de / dv);
  return ExpectationReport{t, n, value, est};
}

// Closed form of the same quantity:
//   <H> = (n + 1/2)(1 + 4 alpha0^2 + beta0^4) / (2 beta0^2)
//         + ((2 alpha0 eps0 - beta0 delta0)^2 + eps0^2) / (2 beta0^2).
inline double hamiltonian_expectation_closed(const InitialData& d, int n) {
  validate(d);
  const double b2 = d.beta0 * d.beta0;
  const double cross = 2.0 * d.alpha0 * d.eps0 - d.beta0 * d.delta0;
  return (n + 0.5) * (1.0 + 4.0 * d.alpha0 * d.alpha0 + b2 * b2) / (2.0 * b2) +
         (cross * cross + d.eps0 * d.eps0) / (2.0 * b2);
}

// Squared norm of the sample by Simpson quadrature; equals 1/(beta0 mu0)
// for every t when beta0 mu0 > 0.
inline double norm_squared(const WaveSample& s) {
  std::vector<double> den(s.grid.count);
  for (int i = 0; i < s.grid.count; ++i) den[i] = std::norm(s.values[i]);
  return integrate(den, s.grid);
}

}  // namespace berryosc
