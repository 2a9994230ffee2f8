#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fgl/grid.hpp"
#include "fgl/solver.hpp"
#include "fgl/tensor.hpp"

namespace fgl {

struct QuotientPoint {
  int direction;  // -1 marks a max over directions
  double step;    // physical offset length
  double value;   // L^p norm of the increment over the interior window
};

struct QuotientCurve {
  std::vector<QuotientPoint> points;
  double p = 2.0;
  double margin = 0.25;
};

namespace detail {

// L^p norm of g(x) - g(x + s e_k) over lattice points with boundary distance
// >= margin. Shared by the node- and cell-centered variants; positions(i)
// yields the boundary distance and index arithmetic is lattice-based.
template <class ValueNorm>
double dq_norm_impl(int dim, int side_count, int m_block,
                    const std::vector<double>& data, double h, double measure,
                    ValueNorm&& value_norm, bool cell_centered, int direction,
                    int step_cells, double p, double margin) {
  if (direction < 0 || direction >= dim)
    throw std::invalid_argument("difference quotient: bad direction");
  if (step_cells < 1)
    throw std::invalid_argument("difference quotient: step must be >= 1");
  const double s = step_cells * h;
  if (s > margin + 1e-12)
    throw std::invalid_argument("difference quotient: offset exceeds margin");
  if (!(p >= 1.0))
    throw std::invalid_argument("difference quotient: p >= 1 required");

  const double offset = cell_centered ? 0.5 * h : 0.0;
  auto axis_margin = [&](int i) {
    const double x = i * h + offset;
    return std::min(x, 1.0 - x);
  };

  std::vector<double> diff(static_cast<std::size_t>(m_block));
  double acc = 0.0, acc_base = 0.0, acc_shift = 0.0;
  auto visit = [&](int i0, int i1) {
    const int flat0 = dim == 1 ? i0 : i1 * side_count + i0;
    int ii[2] = {i0, i1};
    ii[direction] += step_cells;
    const int flat1 = dim == 1 ? ii[0] : ii[1] * side_count + ii[0];
    const double* a = data.data() + static_cast<std::size_t>(flat0) * m_block;
    const double* b = data.data() + static_cast<std::size_t>(flat1) * m_block;
    for (int r = 0; r < m_block; ++r) diff[static_cast<std::size_t>(r)] = a[r] - b[r];
    acc += std::pow(value_norm(std::span<const double>(diff)), p);
    acc_base += std::pow(
        value_norm(std::span<const double>(a, static_cast<std::size_t>(m_block))), p);
    acc_shift += std::pow(
        value_norm(std::span<const double>(b, static_cast<std::size_t>(m_block))), p);
  };

  if (dim == 1) {
    for (int i = 0; i < side_count; ++i)
      if (axis_margin(i) >= margin - 1e-12) visit(i, 0);
  } else {
    for (int j = 0; j < side_count; ++j) {
      if (axis_margin(j) < margin - 1e-12) continue;
      for (int i = 0; i < side_count; ++i)
        if (axis_margin(i) >= margin - 1e-12) visit(i, j);
    }
  }

  const double value = std::pow(acc * measure, 1.0 / p);
  // triangle-inequality sanity: the increment norm can never exceed the sum
  // of the window norms of g itself
  const double cap = std::pow(acc_base * measure, 1.0 / p) +
                     std::pow(acc_shift * measure, 1.0 / p);
  if (value > cap * (1.0 + 1e-12) + 1e-300)
    throw std::logic_error("difference quotient: triangle bound violated");
  return value;
}

}  // namespace detail

/// Difference-quotient norm of a node-centered field, measured in value_norm.
inline double difference_quotient_norm(const Field& g,
                                       const NormFamily& value_norm,
                                       int direction, int step_cells, double p,
                                       double margin) {
  if (value_norm.dim() != g.m)
    throw std::invalid_argument("difference quotient: value norm dim mismatch");
  return detail::dq_norm_impl(
      g.grid.dim, g.grid.nodes_per_side, g.m, g.v, g.grid.spacing(),
      g.grid.cell_measure(),
      [&](std::span<const double> v) { return value_norm.eval_coords(v); },
      false, direction, step_cells, p, margin);
}

/// Difference-quotient norm of a cell-centered matrix field. With
/// dual_valued the entries live in the dual space and F_* applies.
inline double difference_quotient_norm(const GradientField& g,
                                       const TensorNormSpec& tensor,
                                       bool dual_valued, int direction,
                                       int step_cells, double p,
                                       double margin) {
  if (tensor.rows() != g.m || tensor.cols() != g.grid.dim)
    throw std::invalid_argument("difference quotient: tensor shape mismatch");
  const TensorNormSpec norm = dual_valued ? tensor.dual() : tensor;
  return detail::dq_norm_impl(
      g.grid.dim, g.grid.cells_per_side(), g.block(), g.v, g.grid.spacing(),
      g.grid.cell_measure(),
      [&](std::span<const double> v) { return norm.eval_span(v); }, true,
      direction, step_cells, p, margin);
}

/// Fitted decay exponent of a quotient curve with regression diagnostics.
struct BesovEstimate {
  double alpha_hat = 0.0;
  double intercept = 0.0;  // log C
  double r_squared = 1.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  int points = 0;
  bool infinitely_regular = false;  // some increment vanished identically
};

struct FitResult {
  BesovEstimate full;
  std::optional<BesovEstimate> refit;  // window without the two smallest steps
  const BesovEstimate& selected() const { return refit ? *refit : full; }
};

namespace detail {

inline BesovEstimate fit_window(const std::vector<double>& steps,
                                const std::vector<double>& vals,
                                std::size_t from) {
  BesovEstimate est;
  const std::size_t n = steps.size() - from;
  est.points = static_cast<int>(n);
  est.window_lo = steps[from];
  est.window_hi = steps.back();

  double sx = 0, sy = 0;
  for (std::size_t i = from; i < steps.size(); ++i) {
    sx += std::log(steps[i]);
    sy += std::log(vals[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = from; i < steps.size(); ++i) {
    const double dx = std::log(steps[i]) - mx;
    const double dy = std::log(vals[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  est.alpha_hat = sxy / sxx;
  est.intercept = my - est.alpha_hat * mx;
  double ss_res = 0;
  for (std::size_t i = from; i < steps.size(); ++i) {
    const double pred = est.intercept + est.alpha_hat * std::log(steps[i]);
    const double r = std::log(vals[i]) - pred;
    ss_res += r * r;
  }
  est.r_squared = syy > 0 ? std::max(0.0, 1.0 - ss_res / syy)
                          : (ss_res == 0.0 ? 1.0 : 0.0);
  return est;
}

}  // namespace detail

// Least-squares slope of log value against log step. Multiple directions per
// step collapse to the worst (largest) value first. A vanishing increment at
// any step short-circuits to the infinitely-regular flag.
inline FitResult exponent_fit(const QuotientCurve& curve) {
  std::vector<double> steps, vals;
  for (const auto& pt : curve.points) {
    if (!(pt.step > 0.0))
      throw std::invalid_argument("exponent_fit: nonpositive step");
    auto it = std::find(steps.begin(), steps.end(), pt.step);
    if (it == steps.end()) {
      steps.push_back(pt.step);
      vals.push_back(pt.value);
    } else {
      vals[static_cast<std::size_t>(it - steps.begin())] =
          std::max(vals[static_cast<std::size_t>(it - steps.begin())], pt.value);
    }
  }
  // dyadic construction yields sorted steps; enforce for safety
  for (std::size_t i = 1; i < steps.size(); ++i)
    if (steps[i] <= steps[i - 1])
      throw std::invalid_argument("exponent_fit: steps must increase");

  FitResult out;
  for (double v : vals)
    if (v <= 0.0) {
      out.full.infinitely_regular = true;
      out.full.alpha_hat = std::numeric_limits<double>::infinity();
      out.full.points = static_cast<int>(vals.size());
      return out;
    }
  if (steps.size() < 4)
    throw std::invalid_argument("exponent_fit: need at least 4 distinct steps");

  out.full = detail::fit_window(steps, vals, 0);
  // the smallest offsets sit on the discretization floor; refit without them
  // when the full-window fit is poor
  if (out.full.r_squared < 0.99 && steps.size() >= 5)
    out.refit = detail::fit_window(steps, vals, 2);
  return out;
}

enum class ProbeQuantity { dual_flux, gradient, v_primal, v_dual };

inline const char* to_string(ProbeQuantity q) {
  switch (q) {
    case ProbeQuantity::dual_flux: return "jgamma_du";
    case ProbeQuantity::gradient: return "du";
    case ProbeQuantity::v_primal: return "v_primal";
    case ProbeQuantity::v_dual: return "v_dual";
  }
  return "?";
}

struct Prediction {
  ProbeQuantity quantity;
  double alpha;          // predicted decay exponent
  double integrability;  // the L^p scale the bound lives in
  bool dual_valued;      // measured in F_* rather than F
};

/// The four predicted (quantity, exponent, integrability) rows.
struct PredictionSet {
  double gamma, tau, sigma;
  std::array<Prediction, 4> rows;
};

inline PredictionSet predicted_exponents(double gamma, double tau,
                                         double sigma) {
  if (!(gamma > 1.0))
    throw std::invalid_argument("predicted_exponents: gamma > 1");
  if (!(tau > 1.0) || !(tau <= 2.0))
    throw std::invalid_argument("predicted_exponents: tau in (1,2]");
  if (!(sigma >= 2.0))
    throw std::invalid_argument("predicted_exponents: sigma >= 2");
  const double mgt = std::min(gamma, tau);
  const double gp = holder_conjugate(gamma);
  const double tp = holder_conjugate(tau);
  PredictionSet set{gamma, tau, sigma, {}};
  set.rows[0] = {ProbeQuantity::dual_flux, mgt - 1.0, gp, true};
  set.rows[1] = {ProbeQuantity::gradient, mgt / std::max(gamma, sigma), gamma,
                 false};
  set.rows[2] = {ProbeQuantity::v_primal, mgt / sigma, sigma, false};
  set.rows[3] = {ProbeQuantity::v_dual, mgt / tp, tp, true};
  return set;
}

// Cell field of the probed quantity, built from the discrete gradient.
inline GradientField derived_quantity(const TensorNormSpec& tensor,
                                      double gamma, const GradientField& du,
                                      ProbeQuantity q) {
  GradientField out(du.grid, du.m);
  const double sigma = tensor.sigma();
  const double tp = holder_conjugate(tensor.tau());
  for (int c = 0; c < du.grid.cell_count(); ++c) {
    auto src = du.cell(c);
    auto dst = out.cell(c);
    const double f = tensor.eval_span(src);
    switch (q) {
      case ProbeQuantity::gradient:
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
        break;
      case ProbeQuantity::dual_flux:
        tensor.duality_map_span(gamma, src, dst);
        break;
      case ProbeQuantity::v_primal: {
        if (f == 0.0) break;  // limit is 0 for every gamma > 0
        const double s = std::pow(f, (gamma - sigma) / sigma);
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = s * src[i];
        break;
      }
      case ProbeQuantity::v_dual: {
        if (f == 0.0) break;
        tensor.gradient_span(src, dst);
        const double s = std::pow(f, gamma / tp);
        for (auto& v : dst) v *= s;
        break;
      }
    }
  }
  return out;
}

struct ProbeConfig {
  double margin = 0.25;  // interior window: boundary distance >= margin
  int max_steps = 0;     // cap on dyadic steps; 0 = all with s <= margin/2
};

struct RegularityRow {
  Prediction pred;
  BesovEstimate est;
  bool used_refit = false;
  bool capped = false;  // alpha_hat at the grid's certification cap
  bool pass = false;
  std::string note;
};

inline std::vector<int> dyadic_steps(const Grid& grid, double margin,
                                     int max_steps) {
  std::vector<int> steps;
  const double h = grid.spacing();
  for (int s = 1; s * h <= 0.5 * margin + 1e-12; s *= 2) {
    steps.push_back(s);
    if (max_steps > 0 && static_cast<int>(steps.size()) >= max_steps) break;
  }
  return steps;
}

// One row per predicted quantity: probe the derived field with its own
// integrability and value norm, fit the decay exponent, compare. Fit errors
// are reported in the row instead of aborting the remaining rows.
inline std::vector<RegularityRow> regularity_report(const ProblemSpec& spec,
                                                    const Field& u,
                                                    const ProbeConfig& pc) {
  const PredictionSet set = predicted_exponents(
      spec.gamma, spec.tensor.tau(), spec.tensor.sigma());
  const GradientField du = forward_gradient(u);
  const std::vector<int> steps = dyadic_steps(spec.grid, pc.margin, pc.max_steps);

  std::vector<RegularityRow> rows;
  for (const Prediction& pred : set.rows) {
    RegularityRow row;
    row.pred = pred;
    if (pred.quantity == ProbeQuantity::v_dual && spec.gamma > spec.tensor.sigma())
      row.note = "outside stated hypothesis (gamma > sigma)";
    try {
      const GradientField q =
          derived_quantity(spec.tensor, spec.gamma, du, pred.quantity);
      QuotientCurve curve;
      curve.p = pred.integrability;
      curve.margin = pc.margin;
      for (int s : steps) {
        double worst = 0.0;
        for (int k = 0; k < spec.grid.dim; ++k)
          worst = std::max(
              worst, difference_quotient_norm(q, spec.tensor, pred.dual_valued,
                                              k, s, pred.integrability,
                                              pc.margin));
        curve.points.push_back({-1, s * spec.grid.spacing(), worst});
      }
      const FitResult fit = exponent_fit(curve);
      row.est = fit.selected();
      row.used_refit = fit.refit.has_value();
      row.capped = row.est.infinitely_regular || row.est.alpha_hat >= 0.95;
      row.pass = row.est.infinitely_regular ||
                 row.est.alpha_hat >= pred.alpha - 0.1;
    } catch (const std::exception& e) {
      row.pass = false;
      row.note = row.note.empty() ? e.what() : row.note + "; " + e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace fgl
