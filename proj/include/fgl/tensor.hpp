#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fgl/norms.hpp"

namespace fgl {

/// m x n array, column-major; column k is an element of the value space R^m.
struct MatrixPoint {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  MatrixPoint() = default;
  MatrixPoint(int m, int n) : rows(m), cols(n), a(static_cast<std::size_t>(m) * n, 0.0) {}

  double& operator()(int r, int c) { return a[static_cast<std::size_t>(c) * rows + r]; }
  double operator()(int r, int c) const { return a[static_cast<std::size_t>(c) * rows + r]; }

  std::span<double> column(int c) {
    return {a.data() + static_cast<std::size_t>(c) * rows, static_cast<std::size_t>(rows)};
  }
  std::span<const double> column(int c) const {
    return {a.data() + static_cast<std::size_t>(c) * rows, static_cast<std::size_t>(rows)};
  }
};

enum class OuterKind { l2_columns, flat_lp };

// Norm F on the space of m x n arrays. l2_columns combines the column norms
// rho(x_1), ..., rho(x_n) in the Euclidean way; flat_lp ignores the column
// structure and applies lp to all m*n entries. Either way F inherits the
// smoothness/convexity exponents of the generating lp norm.
class TensorNormSpec {
 public:
  static TensorNormSpec l2_columns(NormFamily base, int cols) {
    check_cols(cols);
    return TensorNormSpec(std::move(base), OuterKind::l2_columns, 0.0, cols);
  }

  static TensorNormSpec flat_lp(NormFamily base, double p, int cols) {
    check_cols(cols);
    if (!(p > 1.0)) throw std::invalid_argument("flat_lp requires p > 1");
    return TensorNormSpec(std::move(base), OuterKind::flat_lp, p, cols);
  }

  const NormFamily& base() const { return base_; }
  OuterKind outer() const { return outer_; }
  int rows() const { return base_.dim(); }
  int cols() const { return cols_; }
  double flat_p() const { return flat_p_; }

  std::string label() const {
    if (outer_ == OuterKind::l2_columns)
      return "l2cols(" + base_.label() + ",n=" + std::to_string(cols_) + ")";
    return "flat_lp(" + std::to_string(flat_p_) + ",n=" +
           std::to_string(cols_) + ")";
  }

  double tau() const {
    return outer_ == OuterKind::l2_columns ? base_.tau() : std::min(flat_p_, 2.0);
  }
  double sigma() const {
    return outer_ == OuterKind::l2_columns ? base_.sigma() : std::max(flat_p_, 2.0);
  }

  TensorNormSpec dual() const {
    if (outer_ == OuterKind::l2_columns) return l2_columns(base_.dual(), cols_);
    return flat_lp(base_.dual(), holder_conjugate(flat_p_), cols_);
  }

  // ---- span kernels (column-major m x n blocks) ----

  double eval_span(std::span<const double> z) const {
    check_shape(z);
    if (outer_ == OuterKind::flat_lp) {
      double s = 0.0;
      for (double v : z) s += std::pow(std::abs(v), flat_p_);
      return std::pow(s, 1.0 / flat_p_);
    }
    double s = 0.0;
    for (int c = 0; c < cols_; ++c) {
      const double r = base_.eval_coords(col(z, c));
      s += r * r;
    }
    return std::sqrt(s);
  }

  // DF(z); columns with x_i = 0 contribute 0 (the chain-rule limit).
  void gradient_span(std::span<const double> z, std::span<double> out) const {
    check_shape(z);
    const double f = eval_span(z);
    if (f == 0.0) throw std::domain_error("tensor gradient: undefined at 0");
    if (outer_ == OuterKind::flat_lp) {
      const double scale = std::pow(f, 1.0 - flat_p_);
      for (std::size_t i = 0; i < z.size(); ++i) {
        const double sign = (z[i] > 0.0) - (z[i] < 0.0);
        out[i] = sign * std::pow(std::abs(z[i]), flat_p_ - 1.0) * scale;
      }
      return;
    }
    for (int c = 0; c < cols_; ++c) {
      auto zc = col(z, c);
      auto oc = out.subspan(static_cast<std::size_t>(c) * rows(),
                            static_cast<std::size_t>(rows()));
      const double r = base_.eval_coords(zc);
      if (r == 0.0) {
        for (auto& v : oc) v = 0.0;
        continue;
      }
      base_.gradient_coords(zc, oc);
      const double w = r / f;
      for (auto& v : oc) v *= w;
    }
  }

  // j_F^gamma(z) = F(z)^{gamma-1} DF(z), extended by 0 at the origin.
  void duality_map_span(double gamma, std::span<const double> z,
                        std::span<double> out) const {
    if (!(gamma > 1.0))
      throw std::invalid_argument("tensor duality map requires gamma > 1");
    const double f = eval_span(z);
    if (f == 0.0) {
      for (auto& v : out) v = 0.0;
      return;
    }
    gradient_span(z, out);
    const double scale = std::pow(f, gamma - 1.0);
    for (auto& v : out) v *= scale;
  }

  // ---- typed operations ----

  double eval(const MatrixPoint& z) const {
    check_point(z);
    return eval_span(z.a);
  }

  double eval_dual(const MatrixPoint& zs) const {
    check_point(zs);
    return dual().eval_span(zs.a);
  }

  MatrixPoint gradient(const MatrixPoint& z) const {
    check_point(z);
    MatrixPoint g(rows(), cols_);
    gradient_span(z.a, g.a);
    return g;
  }

  MatrixPoint duality_map(double gamma, const MatrixPoint& z) const {
    check_point(z);
    MatrixPoint g(rows(), cols_);
    duality_map_span(gamma, z.a, g.a);
    return g;
  }

  MatrixPoint inverse_duality_map(double gamma, const MatrixPoint& zs) const {
    check_point(zs);
    MatrixPoint z(rows(), cols_);
    dual().duality_map_span(holder_conjugate(gamma), zs.a, z.a);
    return z;
  }

 private:
  TensorNormSpec(NormFamily base, OuterKind outer, double p, int cols)
      : base_(std::move(base)), outer_(outer), flat_p_(p), cols_(cols) {}

  static void check_cols(int cols) {
    if (cols < 1) throw std::invalid_argument("tensor norm requires cols >= 1");
  }
  void check_shape(std::span<const double> z) const {
    if (z.size() != static_cast<std::size_t>(rows()) * cols_)
      throw std::invalid_argument("tensor norm: shape mismatch");
  }
  void check_point(const MatrixPoint& z) const {
    if (z.rows != rows() || z.cols != cols_)
      throw std::invalid_argument("tensor norm: shape mismatch");
  }
  std::span<const double> col(std::span<const double> z, int c) const {
    return z.subspan(static_cast<std::size_t>(c) * rows(),
                     static_cast<std::size_t>(rows()));
  }

  NormFamily base_;
  OuterKind outer_;
  double flat_p_;
  int cols_;
};

inline MatrixPoint rank_one(const Vec& x, std::span<const double> xi) {
  MatrixPoint z(x.dim(), static_cast<int>(xi.size()));
  for (int c = 0; c < z.cols; ++c)
    for (int r = 0; r < z.rows; ++r) z(r, c) = x[static_cast<std::size_t>(r)] * xi[static_cast<std::size_t>(c)];
  return z;
}

// Both sides of F(x (x) xi) = rho(x) |xi|_2, which pins the structural
// constant of the column-combined norm at 1.
inline std::pair<double, double> rank_one_check(const TensorNormSpec& spec,
                                                const Vec& x,
                                                std::span<const double> xi) {
  if (spec.outer() != OuterKind::l2_columns)
    throw std::invalid_argument("rank_one_check requires an l2_columns norm");
  if (x.dim() != spec.rows() || static_cast<int>(xi.size()) != spec.cols())
    throw std::invalid_argument("rank_one_check: shape mismatch");
  const MatrixPoint z = rank_one(x, xi);
  double xi2 = 0.0;
  for (double v : xi) xi2 += v * v;
  double rho = 0.0;
  bool zero = true;
  for (double v : x.c) zero = zero && (v == 0.0);
  if (!zero) rho = spec.base().eval(x);
  return {spec.eval(z), rho * std::sqrt(xi2)};
}

// Evaluates both routes of the algebraic identity relating the rescaled
// duality map to the rescaled quadratic map:
//   F_*(j^g(z))^{(g'-t')/t'} j^g(z)  ==  F(z)^{(g-t')/t'} j^2(z).
inline std::pair<MatrixPoint, MatrixPoint> dual_representation_check(
    const TensorNormSpec& spec, double gamma, double tau,
    const MatrixPoint& z) {
  if (!(tau > 1.0) || !(tau <= 2.0))
    throw std::invalid_argument("dual_representation_check: tau in (1,2]");
  const double f = spec.eval(z);
  if (f == 0.0)
    throw std::domain_error("dual_representation_check: z must be nonzero");
  const double gp = holder_conjugate(gamma);
  const double tp = holder_conjugate(tau);

  MatrixPoint lhs = spec.duality_map(gamma, z);
  const double fs = spec.eval_dual(lhs);
  const double ls = std::pow(fs, (gp - tp) / tp);
  for (double& v : lhs.a) v *= ls;

  MatrixPoint rhs = spec.duality_map(2.0, z);
  const double rs = std::pow(f, (gamma - tp) / tp);
  for (double& v : rhs.a) v *= rs;

  return {std::move(lhs), std::move(rhs)};
}

}  // namespace fgl
