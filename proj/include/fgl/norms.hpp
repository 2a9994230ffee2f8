#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fgl {

/// Element of the primal space R^m.
struct Vec {
  std::vector<double> c;
  Vec() = default;
  explicit Vec(std::size_t m) : c(m, 0.0) {}
  Vec(std::initializer_list<double> init) : c(init) {}
  int dim() const { return static_cast<int>(c.size()); }
  double& operator[](std::size_t i) { return c[i]; }
  double operator[](std::size_t i) const { return c[i]; }
};

/// Element of the dual space; produced only by dual-space operations.
struct DualVec {
  std::vector<double> c;
  DualVec() = default;
  explicit DualVec(std::size_t m) : c(m, 0.0) {}
  DualVec(std::initializer_list<double> init) : c(init) {}
  int dim() const { return static_cast<int>(c.size()); }
  double& operator[](std::size_t i) { return c[i]; }
  double operator[](std::size_t i) const { return c[i]; }
};

inline double pairing(const DualVec& xs, const Vec& x) {
  if (xs.c.size() != x.c.size())
    throw std::invalid_argument("pairing: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.c.size(); ++i) s += xs.c[i] * x.c[i];
  return s;
}

inline double holder_conjugate(double p) { return p / (p - 1.0); }

enum class NormKind { lp, weighted_lp, euclidean };

// A norm on R^m with closed-form dual and gradient, together with its
// power-type smoothness exponent tau = min(p,2) and convexity exponent
// sigma = max(p,2). Weighted variants are isometric to plain lp through a
// diagonal map, so they share the same exponents.
class NormFamily {
 public:
  static NormFamily lp(double p, int dim) {
    check_p(p);
    check_dim(dim);
    return NormFamily(NormKind::lp, p, dim, {});
  }

  static NormFamily weighted_lp(double p, std::vector<double> weights) {
    check_p(p);
    const int dim = static_cast<int>(weights.size());
    check_dim(dim);
    for (double w : weights)
      if (!(w > 0.0) || !std::isfinite(w))
        throw std::invalid_argument("weighted_lp: weights must be positive");
    return NormFamily(NormKind::weighted_lp, p, dim, std::move(weights));
  }

  static NormFamily euclidean(int dim) {
    check_dim(dim);
    return NormFamily(NormKind::euclidean, 2.0, dim, {});
  }

  NormKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double p() const { return p_; }
  const std::vector<double>& weights() const { return weights_; }

  double tau() const { return declared_tau_ > 0.0 ? declared_tau_ : std::min(p_, 2.0); }
  double sigma() const { return declared_sigma_ > 0.0 ? declared_sigma_ : std::max(p_, 2.0); }

  // Deliberately mislabel the smoothness/convexity exponents. The honest
  // values follow from p; this hook exists so negative-control sweeps can
  // demonstrate that the certification machinery rejects wrong declarations.
  NormFamily with_declared_exponents(double tau, double sigma) const {
    NormFamily n = *this;
    n.declared_tau_ = tau;
    n.declared_sigma_ = sigma;
    return n;
  }

  std::string label() const {
    switch (kind_) {
      case NormKind::euclidean: return "euclidean";
      case NormKind::lp: return "lp(" + std::to_string(p_) + ")";
      case NormKind::weighted_lp: return "wlp(" + std::to_string(p_) + ")";
    }
    return "?";
  }

  // Dual family: lp(p) <-> lp(p'), weights adjust by w -> w^{-p'/p}.
  // A sigma-convex, tau-smooth norm has a tau'-convex, sigma'-smooth dual,
  // so declared exponent overrides propagate by conjugation.
  NormFamily dual() const {
    const double q = holder_conjugate(p_);
    NormFamily d = [&] {
      switch (kind_) {
        case NormKind::euclidean:
          return euclidean(dim_);
        case NormKind::lp:
          return lp(q, dim_);
        case NormKind::weighted_lp: {
          std::vector<double> wq(weights_.size());
          for (std::size_t i = 0; i < weights_.size(); ++i)
            wq[i] = std::pow(weights_[i], -q / p_);
          return weighted_lp(q, std::move(wq));
        }
      }
      throw std::logic_error("unreachable");
    }();
    if (declared_tau_ > 0.0 || declared_sigma_ > 0.0) {
      d.declared_tau_ = holder_conjugate(sigma());
      d.declared_sigma_ = holder_conjugate(tau());
    }
    return d;
  }

  // ---- raw kernels on coordinate spans (shared by primal/dual wrappers) ----

  double eval_coords(std::span<const double> x) const {
    check_input(x);
    if (kind_ != NormKind::weighted_lp && p_ == 2.0) {
      double s = 0.0;
      for (double v : x) s += v * v;
      return std::sqrt(s);
    }
    double s = 0.0;
    if (kind_ == NormKind::weighted_lp) {
      for (std::size_t i = 0; i < x.size(); ++i)
        s += weights_[i] * std::pow(std::abs(x[i]), p_);
    } else {
      for (double v : x) s += std::pow(std::abs(v), p_);
    }
    return std::pow(s, 1.0 / p_);
  }

  // d rho / d x_i = w_i sign(x_i) |x_i|^{p-1} rho(x)^{1-p}; undefined at 0.
  void gradient_coords(std::span<const double> x, std::span<double> out) const {
    const double r = eval_coords(x);
    if (r == 0.0)
      throw std::domain_error("gradient: undefined at the origin");
    if (kind_ != NormKind::weighted_lp && p_ == 2.0) {
      const double inv = 1.0 / r;
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * inv;
      return;
    }
    const double scale = std::pow(r, 1.0 - p_);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double w = (kind_ == NormKind::weighted_lp) ? weights_[i] : 1.0;
      const double sign = (x[i] > 0.0) - (x[i] < 0.0);
      out[i] = w * sign * std::pow(std::abs(x[i]), p_ - 1.0) * scale;
    }
  }

  // j^gamma(x) = rho(x)^{gamma-1} * grad rho(x), extended by 0 at the origin.
  void duality_map_coords(double gamma, std::span<const double> x,
                          std::span<double> out) const {
    check_gamma(gamma);
    const double r = eval_coords(x);
    if (r == 0.0) {
      for (auto& v : out) v = 0.0;
      return;
    }
    if (kind_ != NormKind::weighted_lp && p_ == 2.0) {
      // r^{gamma-2} x avoids the 1/r round trip; exact identity at gamma=2
      const double scale = std::pow(r, gamma - 2.0);
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = scale * x[i];
      return;
    }
    gradient_coords(x, out);
    const double scale = std::pow(r, gamma - 1.0);
    for (auto& v : out) v *= scale;
  }

  // ---- typed operations ----

  double eval(const Vec& x) const { return eval_coords(x.c); }

  double eval_dual(const DualVec& xs) const { return dual().eval_coords(xs.c); }

  DualVec gradient(const Vec& x) const {
    DualVec g(x.c.size());
    gradient_coords(x.c, g.c);
    return g;
  }

  DualVec duality_map(double gamma, const Vec& x) const {
    DualVec g(x.c.size());
    duality_map_coords(gamma, x.c, g.c);
    return g;
  }

  // Inverse of duality_map: the gamma'-duality map of the dual family.
  Vec inverse_duality_map(double gamma, const DualVec& xs) const {
    check_gamma(gamma);
    Vec x(xs.c.size());
    dual().duality_map_coords(holder_conjugate(gamma), xs.c, x.c);
    return x;
  }

 private:
  NormFamily(NormKind kind, double p, int dim, std::vector<double> weights)
      : kind_(kind), p_(p), dim_(dim), weights_(std::move(weights)) {}

  static void check_p(double p) {
    if (!(p > 1.0) || !std::isfinite(p))
      throw std::invalid_argument("norm family requires 1 < p < inf");
  }
  static void check_dim(int dim) {
    if (dim < 1) throw std::invalid_argument("norm family requires dim >= 1");
  }
  static void check_gamma(double gamma) {
    if (!(gamma > 1.0) || !std::isfinite(gamma))
      throw std::invalid_argument("duality map requires gamma > 1");
  }
  void check_input(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_)
      throw std::invalid_argument("norm eval: dimension mismatch");
    for (double v : x)
      if (!std::isfinite(v))
        throw std::invalid_argument("norm eval: non-finite input");
  }

  NormKind kind_;
  double p_;
  int dim_;
  std::vector<double> weights_;
  double declared_tau_ = 0.0;    // 0 means "derive from p"
  double declared_sigma_ = 0.0;
};

}  // namespace fgl
