#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fgl/norms.hpp"
#include "fgl/parallel.hpp"
#include "fgl/rng.hpp"
#include "fgl/tensor.hpp"

namespace fgl {

/// Empirical [min, max] of a scale-invariant ratio over seeded random pairs.
struct RatioReport {
  std::string kind;
  std::string norm_label;
  double gamma = 0.0;     // homogeneity used (0 when not applicable)
  double exponent = 0.0;  // tau or sigma entering the denominator
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  std::int64_t skipped = 0;
};

// Adapters so the ratio sweeps run on plain norm families and on tensor
// norms alike (the latter sample m*n coordinate arrays).
inline int sweep_dim(const NormFamily& n) { return n.dim(); }
inline double sweep_eval(const NormFamily& n, std::span<const double> x) {
  return n.eval_coords(x);
}
inline void sweep_jmap(const NormFamily& n, double gamma,
                       std::span<const double> x, std::span<double> out) {
  n.duality_map_coords(gamma, x, out);
}
inline int sweep_dim(const TensorNormSpec& t) { return t.rows() * t.cols(); }
inline double sweep_eval(const TensorNormSpec& t, std::span<const double> x) {
  return t.eval_span(x);
}
inline void sweep_jmap(const TensorNormSpec& t, double gamma,
                       std::span<const double> x, std::span<double> out) {
  t.duality_map_span(gamma, x, out);
}

namespace detail {

constexpr double kMagLo = 1e-6;
constexpr double kMagHi = 1e6;
constexpr std::int64_t kSweepChunk = 4096;

inline void scale_into(std::span<const double> dir, double mag,
                       std::span<double> out) {
  for (std::size_t i = 0; i < dir.size(); ++i) out[i] = mag * dir[i];
}

inline void normalize_euclid(std::span<double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  const double inv = 1.0 / std::sqrt(s);
  for (double& x : v) x *= inv;
}

// Draws one (u, v) pair. Directions are uniform on the Euclidean sphere and
// magnitudes log-uniform on [1e-6, 1e6]; the samples are stratified so the
// sweep also probes pairs that are nearly coincident and pairs sitting near
// coordinate axes, where the inequalities under test are extremal. Without
// those strata the empirical min/max would take far more than 10^6 samples
// to stabilize.
inline void sample_pair(Rng& g, std::int64_t index, int m, std::span<double> u,
                        std::span<double> v) {
  const int stratum = static_cast<int>(index % 3);
  std::vector<double> dir_u(m), dir_v(m), w(m);

  if (stratum == 2) {
    // base point near a random signed axis
    const int axis = static_cast<int>(g.below(static_cast<std::uint64_t>(m)));
    const double sign = (g.next() & 1) ? 1.0 : -1.0;
    const double off = g.log_uniform(1e-9, 2.0);
    g.unit_sphere(dir_u);
    for (int i = 0; i < m; ++i) dir_u[i] *= off;
    dir_u[axis] += sign;
    normalize_euclid(dir_u);
  } else {
    g.unit_sphere(dir_u);
  }
  const double mag_u = g.log_uniform(kMagLo, kMagHi);
  scale_into(dir_u, mag_u, u);

  if (stratum == 0) {
    g.unit_sphere(dir_v);
    scale_into(dir_v, g.log_uniform(kMagLo, kMagHi), v);
  } else {
    // Occasionally emit an exactly coincident pair. Such pairs are 0/0 for
    // every ratio under test and must be skipped and counted; keeping them in
    // the stream means the skip accounting is exercised on every sweep.
    if (stratum == 1 && g.below(1024) == 0) {
      for (int i = 0; i < m; ++i) v[i] = u[i];
      return;
    }
    // partner within a log-uniform perturbation scale of u
    const double delta = g.log_uniform(1e-9, 2.0);
    g.unit_sphere(w);
    for (int i = 0; i < m; ++i) dir_v[i] = dir_u[i] + delta * w[i];
    normalize_euclid(dir_v);
    const double zeta = g.uniform(-1.0, 1.0);
    scale_into(dir_v, mag_u * std::exp(delta * zeta), v);
  }
}

template <class Norm, class RatioFn>
RatioReport ratio_sweep(std::string kind, const Norm& norm, double gamma,
                        double exponent, std::int64_t samples,
                        std::uint64_t seed, RatioFn&& ratio_of_pair) {
  if (samples < 1) throw std::invalid_argument(kind + ": no samples");
  RatioReport rep;
  rep.kind = std::move(kind);
  rep.norm_label = norm.label();
  rep.gamma = gamma;
  rep.exponent = exponent;
  rep.samples = samples;
  rep.seed = seed;

  struct Partial {
    double mn = std::numeric_limits<double>::infinity();
    double mx = 0.0;
    std::int64_t skipped = 0;
  };
  const std::int64_t n_chunks = (samples + kSweepChunk - 1) / kSweepChunk;
  std::vector<Partial> partials(static_cast<std::size_t>(n_chunks));

  const int m = sweep_dim(norm);
  for_chunks(samples, kSweepChunk,
             [&](std::int64_t c, std::int64_t b, std::int64_t e) {
               Partial part;
               std::vector<double> u(m), v(m);
               for (std::int64_t i = b; i < e; ++i) {
                 Rng g = Rng::substream(seed, static_cast<std::uint64_t>(i));
                 sample_pair(g, i, m, u, v);
                 if (std::equal(u.begin(), u.end(), v.begin())) {
                   ++part.skipped;
                   continue;
                 }
                 const double r = ratio_of_pair(u, v);
                 if (!std::isfinite(r)) {
                   ++part.skipped;
                   continue;
                 }
                 part.mn = std::min(part.mn, r);
                 part.mx = std::max(part.mx, r);
               }
               partials[static_cast<std::size_t>(c)] = part;
             });

  for (const Partial& p : partials) {
    rep.min_ratio = std::min(rep.min_ratio, p.mn);
    rep.max_ratio = std::max(rep.max_ratio, p.mx);
    rep.skipped += p.skipped;
  }
  if (rep.samples == rep.skipped)
    throw std::runtime_error(rep.kind + ": all sample pairs degenerate");
  return rep;
}

}  // namespace detail

// ratio of rho(rho(u)^t u - rho(v)^t v) to (rho(u)+rho(v))^t rho(u-v),
// the two-sided comparison for the V-functional increment.
template <class Norm>
RatioReport v_ratio_sweep(const Norm& norm, double tau_exp,
                          std::int64_t samples, std::uint64_t seed) {
  if (!(tau_exp > -1.0))
    throw std::invalid_argument("v_ratio_sweep: exponent must exceed -1");
  const int m = sweep_dim(norm);
  return detail::ratio_sweep(
      "v_ratio", norm, 0.0, tau_exp, samples, seed,
      [&](std::span<const double> u, std::span<const double> v) {
        const double ru = sweep_eval(norm, u);
        const double rv = sweep_eval(norm, v);
        const double su = std::pow(ru, tau_exp);
        const double sv = std::pow(rv, tau_exp);
        std::vector<double> num(m), diff(m);
        for (int i = 0; i < m; ++i) {
          num[i] = su * u[i] - sv * v[i];
          diff[i] = u[i] - v[i];
        }
        const double den =
            std::pow(ru + rv, tau_exp) * sweep_eval(norm, diff);
        if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
        return sweep_eval(norm, num) / den;
      });
}

enum class XuRoachCheck { sigma_convex, tau_smooth, dual_convex, dual_smooth };

inline const char* to_string(XuRoachCheck w) {
  switch (w) {
    case XuRoachCheck::sigma_convex: return "sigma_convex";
    case XuRoachCheck::tau_smooth: return "tau_smooth";
    case XuRoachCheck::dual_convex: return "dual_convex";
    case XuRoachCheck::dual_smooth: return "dual_smooth";
  }
  return "?";
}

namespace detail {

// <j^g(x)-j^g(y), x-y> vs (rho(x)+rho(y))^{g-e} rho(x-y)^e; min must stay
// positive when e is the true convexity exponent.
template <class Norm>
RatioReport convexity_sweep(std::string kind, const Norm& norm, double g,
                            double e, std::int64_t samples,
                            std::uint64_t seed) {
  const int m = sweep_dim(norm);
  return ratio_sweep(
      std::move(kind), norm, g, e, samples, seed,
      [&, g, e](std::span<const double> x, std::span<const double> y) {
        std::vector<double> jx(m), jy(m), diff(m);
        sweep_jmap(norm, g, x, jx);
        sweep_jmap(norm, g, y, jy);
        double num = 0.0;
        for (int i = 0; i < m; ++i) {
          diff[i] = x[i] - y[i];
          num += (jx[i] - jy[i]) * diff[i];
        }
        const double rd = sweep_eval(norm, diff);
        if (rd == 0.0) return std::numeric_limits<double>::quiet_NaN();
        const double den =
            std::pow(sweep_eval(norm, x) + sweep_eval(norm, y), g - e) *
            std::pow(rd, e);
        return num / den;
      });
}

// rho_*(j^g(x)-j^g(y)) vs (rho(x)+rho(y))^{g-e} rho(x-y)^{e-1}; max must stay
// finite when e is the true smoothness exponent.
template <class Norm>
RatioReport smoothness_sweep(std::string kind, const Norm& norm, double g,
                             double e, std::int64_t samples,
                             std::uint64_t seed) {
  const int m = sweep_dim(norm);
  const auto dual = norm.dual();
  return ratio_sweep(
      std::move(kind), norm, g, e, samples, seed,
      [&, g, e, dual](std::span<const double> x, std::span<const double> y) {
        std::vector<double> jx(m), jy(m), diff(m);
        sweep_jmap(norm, g, x, jx);
        sweep_jmap(norm, g, y, jy);
        for (int i = 0; i < m; ++i) {
          jx[i] -= jy[i];
          diff[i] = x[i] - y[i];
        }
        const double rd = sweep_eval(norm, diff);
        if (rd == 0.0) return std::numeric_limits<double>::quiet_NaN();
        const double den =
            std::pow(sweep_eval(norm, x) + sweep_eval(norm, y), g - e) *
            std::pow(rd, e - 1.0);
        return sweep_eval(dual, jx) / den;
      });
}

}  // namespace detail

// Randomized certification of the power-type convexity/smoothness
// inequalities for the duality map, in primal and dual form. The dual forms
// run the same kernels on the dual family with conjugated homogeneity and
// exponents.
template <class Norm>
RatioReport xu_roach_sweep(const Norm& norm, double gamma, XuRoachCheck which,
                           std::int64_t samples, std::uint64_t seed) {
  if (!(gamma > 1.0))
    throw std::invalid_argument("xu_roach_sweep: gamma must exceed 1");
  const double gp = holder_conjugate(gamma);
  switch (which) {
    case XuRoachCheck::sigma_convex:
      return detail::convexity_sweep("sigma_convex", norm, gamma, norm.sigma(),
                                     samples, seed);
    case XuRoachCheck::tau_smooth:
      return detail::smoothness_sweep("tau_smooth", norm, gamma, norm.tau(),
                                      samples, seed);
    case XuRoachCheck::dual_convex:
      return detail::convexity_sweep("dual_convex", norm.dual(), gp,
                                     holder_conjugate(norm.tau()), samples,
                                     seed);
    case XuRoachCheck::dual_smooth:
      return detail::smoothness_sweep("dual_smooth", norm.dual(), gp,
                                      holder_conjugate(norm.sigma()), samples,
                                      seed);
  }
  throw std::logic_error("unreachable");
}

/// Worst relative violation of the duality-map identities over random points.
struct IdentityReport {
  std::string norm_label;
  double gamma = 0.0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  double max_pairing_err = 0.0;    // <j(x),x> vs rho(x)^gamma
  double max_dual_norm_err = 0.0;  // rho_*(j(x)) vs rho(x)^{gamma-1}
  double max_round_trip_err = 0.0; // inverse map composed with the map
};

inline IdentityReport identity_sweep(const NormFamily& norm, double gamma,
                                     std::int64_t samples,
                                     std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("identity_sweep: no samples");
  IdentityReport rep;
  rep.norm_label = norm.label();
  rep.gamma = gamma;
  rep.samples = samples;
  rep.seed = seed;

  const int m = norm.dim();
  const NormFamily dual = norm.dual();
  const double gp = holder_conjugate(gamma);

  struct Partial {
    double pairing = 0.0, dual_norm = 0.0, round_trip = 0.0;
  };
  const std::int64_t n_chunks =
      (samples + detail::kSweepChunk - 1) / detail::kSweepChunk;
  std::vector<Partial> partials(static_cast<std::size_t>(n_chunks));

  for_chunks(samples, detail::kSweepChunk,
             [&](std::int64_t c, std::int64_t b, std::int64_t e) {
               Partial part;
               std::vector<double> x(m), dir(m), j(m), back(m);
               for (std::int64_t i = b; i < e; ++i) {
                 Rng g = Rng::substream(seed, static_cast<std::uint64_t>(i));
                 g.unit_sphere(dir);
                 detail::scale_into(
                     dir, g.log_uniform(detail::kMagLo, detail::kMagHi), x);
                 const double r = norm.eval_coords(x);
                 norm.duality_map_coords(gamma, x, j);

                 double pair = 0.0;
                 for (int k = 0; k < m; ++k) pair += j[k] * x[k];
                 const double rg = std::pow(r, gamma);
                 part.pairing =
                     std::max(part.pairing, std::abs(pair - rg) / rg);

                 const double jd = dual.eval_coords(j);
                 const double rg1 = std::pow(r, gamma - 1.0);
                 part.dual_norm =
                     std::max(part.dual_norm, std::abs(jd - rg1) / rg1);

                 dual.duality_map_coords(gp, j, back);
                 std::vector<double> diff(m);
                 for (int k = 0; k < m; ++k) diff[k] = back[k] - x[k];
                 part.round_trip = std::max(
                     part.round_trip, norm.eval_coords(diff) / r);
               }
               partials[static_cast<std::size_t>(c)] = part;
             });

  for (const Partial& p : partials) {
    rep.max_pairing_err = std::max(rep.max_pairing_err, p.pairing);
    rep.max_dual_norm_err = std::max(rep.max_dual_norm_err, p.dual_norm);
    rep.max_round_trip_err = std::max(rep.max_round_trip_err, p.round_trip);
  }
  return rep;
}

enum class ModulusKind { convexity, smoothness };

// Monte-Carlo bound for the modulus of convexity (an inf: minimum over
// samples, so an upper bound) or smoothness (a sup: maximum over samples, a
// lower bound). One vector is pinned to the first coordinate axis and the
// partner is sampled; exact only under enough symmetry, so callers should
// treat the result as an empirical bound.
inline double estimate_modulus(const NormFamily& norm, ModulusKind which,
                               double eps, std::int64_t samples,
                               std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("estimate_modulus: no samples");
  const int m = norm.dim();

  std::vector<double> x(m, 0.0);
  x[0] = 1.0;
  {
    const double r = norm.eval_coords(x);
    x[0] /= r;
  }

  if (which == ModulusKind::smoothness) {
    if (!(eps > 0.0))
      throw std::invalid_argument("smoothness modulus requires eps > 0");
    double best = 0.0;
    std::vector<double> dir(m), plus(m), minus(m);
    for (std::int64_t i = 0; i < samples; ++i) {
      Rng g = Rng::substream(seed, static_cast<std::uint64_t>(i));
      g.unit_sphere(dir);
      const double scale = eps / norm.eval_coords(dir);
      for (int k = 0; k < m; ++k) {
        plus[k] = x[k] + scale * dir[k];
        minus[k] = x[k] - scale * dir[k];
      }
      const double v =
          0.5 * (norm.eval_coords(plus) + norm.eval_coords(minus) - 2.0);
      best = std::max(best, v);
    }
    return best;
  }

  // convexity
  if (eps < 0.0 || eps > 2.0)
    throw std::invalid_argument("convexity modulus requires eps in [0,2]");
  if (eps == 0.0) return 0.0;

  auto midpoint_defect = [&](std::span<const double> y) {
    std::vector<double> mid(m);
    for (int k = 0; k < m; ++k) mid[k] = 0.5 * (x[k] + y[k]);
    return 1.0 - norm.eval_coords(mid);
  };

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> dir(m), y0(m), z(m), y(m);
  for (std::int64_t i = 0; i < samples; ++i) {
    Rng g = Rng::substream(seed, static_cast<std::uint64_t>(i));
    g.unit_sphere(dir);
    const double rs = norm.eval_coords(dir);
    for (int k = 0; k < m; ++k) y0[k] = dir[k] / rs;
    std::vector<double> dxy(m);
    for (int k = 0; k < m; ++k) dxy[k] = x[k] - y0[k];
    if (norm.eval_coords(dxy) < eps) continue;  // inadmissible partner
    best = std::min(best, midpoint_defect(y0));

    // walk toward x until the separation constraint is active; points on the
    // constraint boundary are where the infimum is approached
    double lo = 0.0, hi = 1.0;
    bool degenerate = false;
    for (int it = 0; it < 80; ++it) {
      const double t = 0.5 * (lo + hi);
      for (int k = 0; k < m; ++k) z[k] = (1.0 - t) * x[k] + t * y0[k];
      const double rz = norm.eval_coords(z);
      if (rz < 1e-12) {
        degenerate = true;
        break;
      }
      for (int k = 0; k < m; ++k) y[k] = z[k] / rz;
      for (int k = 0; k < m; ++k) dxy[k] = x[k] - y[k];
      if (norm.eval_coords(dxy) >= eps)
        hi = t;
      else
        lo = t;
    }
    if (degenerate) continue;
    for (int k = 0; k < m; ++k) z[k] = (1.0 - hi) * x[k] + hi * y0[k];
    const double rz = norm.eval_coords(z);
    for (int k = 0; k < m; ++k) y[k] = z[k] / rz;
    for (int k = 0; k < m; ++k) dxy[k] = x[k] - y[k];
    if (norm.eval_coords(dxy) >= eps)
      best = std::min(best, midpoint_defect(y));
  }
  if (!std::isfinite(best))
    throw std::runtime_error("estimate_modulus: no admissible sample pairs");
  return best;
}

}  // namespace fgl
