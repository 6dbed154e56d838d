#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace berryosc {

// Physicists' Hermite polynomial H_n(x) by the three-term recurrence
// H_0 = 1, H_1 = 2x, H_{k+1} = 2x H_k - 2k H_{k-1}.
inline double hermite(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite: order must be non-negative");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

// Normalized oscillator eigenfunction e^{-xi^2/2} H_n(xi) / sqrt(2^n n! sqrt(pi)).
//
// The recurrence runs on the weighted form itself,
//   h_0 = pi^{-1/4} e^{-xi^2/2},  h_1 = sqrt(2) xi h_0,
//   h_{k+1} = xi sqrt(2/(k+1)) h_k - sqrt(k/(k+1)) h_{k-1},
// so intermediates stay bounded where the raw product H_n(xi) e^{-xi^2/2}
// would overflow long before the normalization divides it back down
// (H_n grows like 2^n n!; fine up to at least n = 50, |xi| = 30).
inline double weighted_hermite(int n, double xi) {
  if (n < 0) throw std::invalid_argument("weighted_hermite: order must be non-negative");
  const double h0 = std::exp(-0.5 * xi * xi) / std::pow(std::numbers::pi, 0.25);
  if (n == 0) return h0;
  double prev = h0;
  double cur = std::numbers::sqrt2 * xi * h0;
  for (int k = 1; k < n; ++k) {
    const double next =
        xi * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(double(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace berryosc
