#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "berryosc/grid.hpp"
#include "berryosc/hermite.hpp"
#include "berryosc/oscillator.hpp"

namespace berryosc {

// Complex wavefunction values on a grid at fixed time, tagged with the
// quantum number n.
struct WaveSample {
  Grid grid;
  double t;
  int n;
  std::vector<std::complex<double>> values;
};

// Gaussian-tail margin for the grid truncation test: the scaled argument
// beta*x + eps must clear the classical turning point sqrt(2n+1) by this much
// at both grid edges.  A margin of 6 puts the edge amplitude below ~1e-12,
// which keeps quadrature and the propagator's edge-leak check comfortably
// below their tolerances while admitting the standard [-12,12] box.
inline constexpr double kTailMargin = 6.0;

namespace detail {

inline std::complex<double> psi_from_state(const ParameterState& p, int n, double x) {
  const double xi = p.beta * x + p.eps;
  const double phase = p.alpha * x * x + p.delta * x + p.kappa + (2 * n + 1) * p.gamma;
  // mu < 0 (possible when mu0 < 0) uses the principal complex square root,
  // i.e. a fixed -i prefactor; mu0 > 0 keeps mu(t) > 0 for all t.
  const std::complex<double> inv_sqrt_mu =
      1.0 / std::sqrt(std::complex<double>(p.mu, 0.0));
  return std::polar(1.0, phase) * weighted_hermite(n, xi) * inv_sqrt_mu;
}

}  // namespace detail

// psi_n(x, t): phase factor exp(i(alpha x^2 + delta x + kappa) + i(2n+1)gamma)
// times the weighted Hermite function of beta x + eps, divided by sqrt(mu).
inline std::complex<double> psi(const InitialData& d, int n, double x, double t) {
  if (n < 0) throw std::invalid_argument("psi: order must be non-negative");
  return detail::psi_from_state(evaluate(d, t), n, x);
}

// True when |beta x + eps| >= sqrt(2n+1) + kTailMargin at both edges and the
// grid straddles the wavepacket, so the truncated Gaussian tails are
// negligible for quadrature.
inline bool grid_adequate(const InitialData& d, int n, const Grid& g, double t) {
  const ParameterState p = evaluate(d, t);
  const double lo = std::min(p.beta * g.x_min + p.eps, p.beta * g.x_max + p.eps);
  const double hi = std::max(p.beta * g.x_min + p.eps, p.beta * g.x_max + p.eps);
  const double need = std::sqrt(2.0 * n + 1.0) + kTailMargin;
  return lo <= -need && hi >= need;
}

// Sample psi_n on the grid.  Rejects grids that fail the truncation test,
// since any quadrature over the sample would then be untrustworthy.
inline WaveSample sample(const InitialData& d, int n, const Grid& g, double t) {
  if (n < 0) throw std::invalid_argument("sample: order must be non-negative");
  if (!grid_adequate(d, n, g, t))
    throw std::invalid_argument(
        "sample: grid too narrow, |beta*x_edge + eps| < sqrt(2n+1) + margin");
  const ParameterState p = evaluate(d, t);
  WaveSample s{g, t, n, {}};
  s.values.resize(g.count);
  for (int i = 0; i < g.count; ++i) s.values[i] = detail::psi_from_state(p, n, g.x(i));
  return s;
}

// Grid L2 norm of 2i psi_t + psi_xx - x^2 psi over interior points, relative
// to the norm of psi, with psi_t a central difference of the two outer
// samples and psi_xx a second-order central difference.  The three samples
// must share one grid; (minus, center, plus) are at times t-dt, t, t+dt.
inline double schroedinger_residual(const WaveSample& minus, const WaveSample& center,
                                    const WaveSample& plus, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("schroedinger_residual: dt must be positive");
  const Grid& g = center.grid;
  if (g.count < 5) throw std::invalid_argument("schroedinger_residual: need >= 3 interior points");
  if ((int)minus.values.size() != g.count || (int)plus.values.size() != g.count ||
      (int)center.values.size() != g.count)
    throw std::invalid_argument("schroedinger_residual: sample size mismatch");
  const double inv_dx2 = 1.0 / (g.dx() * g.dx());
  double num = 0.0;
  double den = 0.0;
  for (int i = 1; i + 1 < g.count; ++i) {
    const std::complex<double> pt = (plus.values[i] - minus.values[i]) / (2.0 * dt);
    const std::complex<double> pxx =
        (center.values[i + 1] - 2.0 * center.values[i] + center.values[i - 1]) * inv_dx2;
    const double x = g.x(i);
    const std::complex<double> r =
        std::complex<double>(0.0, 2.0) * pt + pxx - x * x * center.values[i];
    num += std::norm(r);
    den += std::norm(center.values[i]);
  }
  return std::sqrt(num / den);
}

// Convenience overload: sample the analytic family at t-dt, t, t+dt and
// measure how well it satisfies the Schroedinger equation on this grid.
// Differentiates the evaluated wavefunction numerically, so the check is
// independent of the algebra that produced the family.
inline double schroedinger_residual(const InitialData& d, int n, const Grid& g, double t,
                                    double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("schroedinger_residual: dt must be positive");
  return schroedinger_residual(sample(d, n, g, t - dt), sample(d, n, g, t),
                               sample(d, n, g, t + dt), dt);
}

}  // namespace berryosc
