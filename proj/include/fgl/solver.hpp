#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fgl/grid.hpp"
#include "fgl/tensor.hpp"

namespace fgl {

/// Discrete problem data: minimize  sum_c (F(Du_c)^2+eps^2)^{g/2}/g * h^n
/// - sum_i <f_i, u_i> h^n  over fields u with the given Dirichlet trace.
struct ProblemSpec {
  Grid grid;
  TensorNormSpec tensor;
  double gamma;
  Field f;         // dual-valued source, sampled at nodes
  Field boundary;  // Dirichlet trace; only boundary entries are read

  ProblemSpec(Grid g, TensorNormSpec t, double gam, Field src, Field bd)
      : grid(g), tensor(std::move(t)), gamma(gam), f(std::move(src)),
        boundary(std::move(bd)) {
    if (!(gamma > 1.0)) throw std::invalid_argument("problem: gamma > 1");
    if (tensor.cols() != grid.dim)
      throw std::invalid_argument("problem: tensor cols must equal grid dim");
    if (f.m != tensor.rows() || boundary.m != tensor.rows())
      throw std::invalid_argument("problem: component count mismatch");
    if (!(f.grid == grid) || !(boundary.grid == grid))
      throw std::invalid_argument("problem: grid mismatch");
  }

  int components() const { return tensor.rows(); }
};

struct SolverConfig {
  double eps0 = 1e-1;
  int eps_levels = 12;     // continuation: eps_k = eps0 * 2^-k
  double grad_tol = 1e-8;  // on the max-norm of the energy gradient (h^n included)
  long max_iters = 200000;
  std::uint64_t seed = 0;
};

struct SolveReport {
  Field u;
  std::vector<double> energy_trace;  // energy after each accepted step
  double final_eps = 0.0;
  double weak_residual = 0.0;
  long iterations = 0;
  bool converged = false;
};

namespace detail {

// Below this the flux is clamped to zero; F^2 would underflow and the true
// limit is 0 for every gamma > 1.
constexpr double kFluxFloor = 1e-140;

inline double smoothed_power(double t, double eps, double gamma) {
  return std::pow(t * t + eps * eps, 0.5 * gamma) / gamma;
}

// flux(Du) = (F^2+eps^2)^{(gamma-2)/2} F * DF, the gradient of the smoothed
// integrand with respect to the cell matrix.
inline void regularized_flux_cell(const TensorNormSpec& tensor, double gamma,
                                  double eps, std::span<const double> du,
                                  std::span<double> out) {
  const double f = tensor.eval_span(du);
  if (f <= kFluxFloor && eps == 0.0) {
    for (auto& v : out) v = 0.0;
    return;
  }
  if (f == 0.0) {
    for (auto& v : out) v = 0.0;
    return;
  }
  tensor.gradient_span(du, out);
  const double scale = std::pow(f * f + eps * eps, 0.5 * (gamma - 2.0)) * f;
  for (auto& v : out) v *= scale;
}

}  // namespace detail

inline void impose_boundary(Field& u, const Field& boundary) {
  for (int n = 0; n < u.grid.node_count(); ++n)
    if (u.grid.on_boundary(n)) {
      auto dst = u.node(n);
      auto src = boundary.node(n);
      for (int r = 0; r < u.m; ++r) dst[r] = src[r];
    }
}

inline double energy(const ProblemSpec& spec, double eps, const Field& u) {
  if (u.m != spec.components() || !(u.grid == spec.grid))
    throw std::invalid_argument("energy: field shape mismatch");
  const double hn = spec.grid.cell_measure();
  const GradientField du = forward_gradient(u);

  double bulk = 0.0;
  for (int c = 0; c < spec.grid.cell_count(); ++c)
    bulk += detail::smoothed_power(spec.tensor.eval_span(du.cell(c)), eps,
                                   spec.gamma);

  double load = 0.0;
  for (int n = 0; n < spec.grid.node_count(); ++n) {
    auto fn = spec.f.node(n);
    auto un = u.node(n);
    for (int r = 0; r < u.m; ++r) load += fn[r] * un[r];
  }
  return (bulk - load) * hn;
}

// Pointwise residual density adj_div(flux) - f; rows of boundary nodes are
// zeroed. The derivative of energy() along a perturbation du vanishing on
// the boundary is h^n * sum_i <density_i, du_i>.
inline Field energy_gradient(const ProblemSpec& spec, double eps,
                             const Field& u) {
  if (u.m != spec.components() || !(u.grid == spec.grid))
    throw std::invalid_argument("energy_gradient: field shape mismatch");
  GradientField flux(spec.grid, u.m);
  const GradientField du = forward_gradient(u);
  for (int c = 0; c < spec.grid.cell_count(); ++c)
    detail::regularized_flux_cell(spec.tensor, spec.gamma, eps, du.cell(c),
                                  flux.cell(c));
  Field g = adjoint_divergence(flux);
  for (int n = 0; n < spec.grid.node_count(); ++n) {
    auto gn = g.node(n);
    if (spec.grid.on_boundary(n)) {
      for (int r = 0; r < g.m; ++r) gn[r] = 0.0;
    } else {
      auto fn = spec.f.node(n);
      for (int r = 0; r < g.m; ++r) gn[r] -= fn[r];
    }
  }
  return g;
}

// Harmonic extension of the boundary trace: conjugate gradients on the
// linear system adj_div(grad u) = 0 over interior nodes. Used as the warm
// start for the nonlinear solve.
inline Field harmonic_extension(const Grid& grid, const Field& boundary) {
  Field u(grid, boundary.m);
  impose_boundary(u, boundary);

  const int nn = grid.node_count();
  const int m = boundary.m;
  auto apply = [&](const Field& w) {
    Field aw = adjoint_divergence(forward_gradient(w));
    for (int n = 0; n < nn; ++n)
      if (grid.on_boundary(n)) {
        auto row = aw.node(n);
        for (int r = 0; r < m; ++r) row[r] = 0.0;
      }
    return aw;
  };
  auto dot = [&](const Field& a, const Field& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i];
    return s;
  };

  Field r = apply(u);
  for (double& x : r.v) x = -x;
  Field p = r;
  double rr = dot(r, r);
  const double tol2 = std::max(rr, 1.0) * 1e-26;
  const int max_it = 10 * nn + 100;
  for (int it = 0; it < max_it && rr > tol2; ++it) {
    Field ap = apply(p);
    const double pap = dot(p, ap);
    if (pap <= 0.0) break;
    const double alpha = rr / pap;
    for (std::size_t i = 0; i < u.v.size(); ++i) {
      u.v[i] += alpha * p.v[i];
      r.v[i] -= alpha * ap.v[i];
    }
    const double rr_new = dot(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < p.v.size(); ++i)
      p.v[i] = r.v[i] + beta * p.v[i];
  }
  impose_boundary(u, boundary);
  return u;
}

// Max over interior nodes of the dual norm of the gradient density, scaled
// by the cell measure; this is the max-norm of the literal energy gradient.
inline double gradient_measure(const ProblemSpec& spec, const Field& g) {
  const NormFamily dual = spec.tensor.base().dual();
  double worst = 0.0;
  for (int n = 0; n < spec.grid.node_count(); ++n) {
    if (spec.grid.on_boundary(n)) continue;
    worst = std::max(worst, dual.eval_coords(g.node(n)));
  }
  return worst * spec.grid.cell_measure();
}

// Maximal violation of the discrete weak form over the nodal hat-function
// basis, evaluated with the eps = 0 flux and normalized per test function.
inline double weak_residual(const ProblemSpec& spec, const Field& u) {
  const Grid& grid = spec.grid;
  const int m = spec.components();
  const double hn = grid.cell_measure();
  const double h = grid.spacing();

  GradientField flux(grid, m);
  const GradientField du = forward_gradient(u);
  for (int c = 0; c < grid.cell_count(); ++c)
    detail::regularized_flux_cell(spec.tensor, spec.gamma, 0.0, du.cell(c),
                                  flux.cell(c));
  Field density = adjoint_divergence(flux);
  for (int n = 0; n < grid.node_count(); ++n) {
    auto dn = density.node(n);
    auto fn = spec.f.node(n);
    for (int r = 0; r < m; ++r) dn[r] -= fn[r];
  }

  const NormFamily dual = spec.tensor.base().dual();
  const int dim = grid.dim;
  std::vector<double> w(m), rank1(static_cast<std::size_t>(m) * dim);

  double worst = 0.0;
  for (int n = 0; n < grid.node_count(); ++n) {
    if (grid.on_boundary(n)) continue;
    auto dn = density.node(n);
    const double r = dual.eval_coords(dn);
    if (r == 0.0) continue;
    // direction attaining the dual norm of the density
    dual.gradient_coords(dn, w);

    // || D(hat_n * w) ||_{L^gamma(F)}
    double denom_pow = 0.0;
    if (dim == 1) {
      for (int side = 0; side < 2; ++side) {
        const double xi = side == 0 ? 1.0 / h : -1.0 / h;
        for (int rr = 0; rr < m; ++rr) rank1[static_cast<std::size_t>(rr)] = w[static_cast<std::size_t>(rr)] * xi;
        denom_pow +=
            std::pow(spec.tensor.eval_span(rank1), spec.gamma) * hn;
      }
    } else {
      for (int dj = -1; dj <= 0; ++dj) {
        for (int di = -1; di <= 0; ++di) {
          const double sx = (di == -1 ? 1.0 : -1.0) / (2.0 * h);
          const double sy = (dj == -1 ? 1.0 : -1.0) / (2.0 * h);
          for (int rr = 0; rr < m; ++rr) {
            rank1[static_cast<std::size_t>(rr)] = w[static_cast<std::size_t>(rr)] * sx;
            rank1[static_cast<std::size_t>(m + rr)] = w[static_cast<std::size_t>(rr)] * sy;
          }
          denom_pow +=
              std::pow(spec.tensor.eval_span(rank1), spec.gamma) * hn;
        }
      }
    }
    const double denom = std::pow(denom_pow, 1.0 / spec.gamma);
    worst = std::max(worst, hn * r / denom);
  }
  return worst;
}

// Armijo-backtracked gradient descent under eps-continuation. The energy is
// convex, so plain descent is slow but dependable, including where the
// linearized operator loses rank.
inline SolveReport minimize(const ProblemSpec& spec, const SolverConfig& cfg,
                            const Field* initial = nullptr) {
  if (!(cfg.eps0 > 0.0) || cfg.eps_levels < 1 || !(cfg.grad_tol > 0.0) ||
      cfg.max_iters < 1)
    throw std::invalid_argument("solver config: positive tolerances required");

  SolveReport rep;
  rep.u = initial ? *initial : harmonic_extension(spec.grid, spec.boundary);
  if (initial && (rep.u.m != spec.components() || !(rep.u.grid == spec.grid)))
    throw std::invalid_argument("minimize: initial field shape mismatch");
  impose_boundary(rep.u, spec.boundary);

  const double hn = spec.grid.cell_measure();
  const std::size_t sz = rep.u.v.size();
  Field trial = rep.u;
  double step = 1.0;
  bool stalled = false;

  for (int level = 0; level < cfg.eps_levels; ++level) {
    const double eps = cfg.eps0 * std::pow(2.0, -level);
    const bool last = level == cfg.eps_levels - 1;
    // intermediate levels are warm starts; only the final one needs full depth
    const double tol = last ? cfg.grad_tol : 30.0 * cfg.grad_tol;
    rep.final_eps = eps;

    double e_cur = energy(spec, eps, rep.u);
    while (true) {
      const Field g = energy_gradient(spec, eps, rep.u);
      if (gradient_measure(spec, g) <= tol) {
        if (last) rep.converged = true;
        break;
      }
      if (rep.iterations >= cfg.max_iters) break;

      double gsq = 0.0;
      for (double x : g.v) gsq += x * x;

      step = std::min(step * 2.0, 1e12);
      bool accepted = false;
      while (step > 1e-30) {
        for (std::size_t i = 0; i < sz; ++i)
          trial.v[i] = rep.u.v[i] - step * g.v[i];
        const double e_try = energy(spec, eps, trial);
        const double slack = 2e-16 * (std::abs(e_cur) + std::abs(e_try));
        if (e_try <= e_cur && e_try <= e_cur - 1e-4 * step * hn * gsq + slack) {
          std::swap(rep.u.v, trial.v);
          e_cur = e_try;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {  // progress below floating-point resolution
        stalled = true;
        break;
      }
      rep.energy_trace.push_back(e_cur);
      ++rep.iterations;
    }
    if (rep.iterations >= cfg.max_iters || stalled) break;
  }

  rep.weak_residual = weak_residual(spec, rep.u);
  return rep;
}

}  // namespace fgl
