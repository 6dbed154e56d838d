#pragma once

#include <stdexcept>

namespace berryosc {

// Uniform 1-D spatial grid on [x_min, x_max] with `count` points.
struct Grid {
  double x_min;
  double x_max;
  int count;

  Grid(double x_min_, double x_max_, int count_)
      : x_min(x_min_), x_max(x_max_), count(count_) {
    if (count < 3) throw std::invalid_argument("Grid: count must be >= 3");
    if (!(x_min < x_max)) throw std::invalid_argument("Grid: x_min must be < x_max");
  }

  double dx() const { return (x_max - x_min) / (count - 1); }
  double x(int i) const { return x_min + i * dx(); }
};

}  // namespace berryosc
