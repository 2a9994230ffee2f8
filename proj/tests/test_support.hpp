#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "fgl/rng.hpp"

namespace fgl::testing {

// Central finite difference of f along coordinate i; the independent oracle
// for analytic gradients.
inline double central_difference(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x, std::size_t i, double h = 1e-6) {
  x[i] += h;
  const double fp = f(x);
  x[i] -= 2.0 * h;
  const double fm = f(x);
  return (fp - fm) / (2.0 * h);
}

inline std::vector<double> random_direction(Rng& g, int m) {
  std::vector<double> v(m);
  g.unit_sphere(v);
  return v;
}

inline std::vector<double> random_point(Rng& g, int m, double lo = 1e-2,
                                        double hi = 1e2) {
  std::vector<double> v = random_direction(g, m);
  const double mag = g.log_uniform(lo, hi);
  for (double& x : v) x *= mag;
  return v;
}

}  // namespace fgl::testing
