#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fgl/sweeps.hpp"

using namespace fgl;
using Catch::Approx;

TEST_CASE("v ratio sweep identity at exponent zero") {
  const NormFamily norm = NormFamily::lp(3.0, 4);
  const RatioReport r = v_ratio_sweep(norm, 0.0, 20000, 7);
  // both sides are literally the same expression, so the ratio is exactly 1
  CHECK(r.min_ratio == 1.0);
  CHECK(r.max_ratio == 1.0);
  CHECK(r.samples == 20000);
  CHECK(r.skipped >= 0);
}

TEST_CASE("v ratio sweep rejects bad inputs") {
  const NormFamily norm = NormFamily::lp(2.0, 2);
  CHECK_THROWS_AS(v_ratio_sweep(norm, -1.0, 100, 1), std::invalid_argument);
  CHECK_THROWS_AS(v_ratio_sweep(norm, 1.0, 0, 1), std::invalid_argument);
}

TEST_CASE("v ratio window is positive and stable under doubling") {
  const NormFamily norm = NormFamily::lp(3.0, 4);
  const RatioReport r1 = v_ratio_sweep(norm, 1.0, 100000, 42);
  const RatioReport r2 = v_ratio_sweep(norm, 1.0, 200000, 42);
  CHECK(r1.min_ratio > 0.0);
  CHECK(std::isfinite(r1.max_ratio));
  // doubling extends the same substream, so the window can only widen
  CHECK(r2.min_ratio <= r1.min_ratio);
  CHECK(r2.max_ratio >= r1.max_ratio);
  CHECK(r1.min_ratio / r2.min_ratio <= 1.1);
  CHECK(r2.max_ratio / r1.max_ratio <= 1.1);
}

TEST_CASE("coincident pairs are skipped and counted deterministically") {
  const NormFamily norm = NormFamily::lp(1.5, 3);
  const RatioReport a = v_ratio_sweep(norm, 0.5, 100000, 11);
  const RatioReport b = v_ratio_sweep(norm, 0.5, 100000, 11);
  CHECK(a.skipped > 0);  // the sampler plants exactly coincident pairs
  CHECK(a.skipped == b.skipped);
  CHECK(a.min_ratio == b.min_ratio);
  CHECK(a.max_ratio == b.max_ratio);
  CHECK(std::isfinite(a.min_ratio));
  CHECK(a.min_ratio > 0.0);
}

TEST_CASE("xu-roach ratios collapse to 1 for the Euclidean quadratic case") {
  const NormFamily norm = NormFamily::lp(2.0, 4);
  const RatioReport conv =
      xu_roach_sweep(norm, 2.0, XuRoachCheck::sigma_convex, 20000, 3);
  CHECK(conv.min_ratio == Approx(1.0).epsilon(1e-12));
  CHECK(conv.max_ratio == Approx(1.0).epsilon(1e-12));

  const RatioReport smooth =
      xu_roach_sweep(norm, 2.0, XuRoachCheck::tau_smooth, 20000, 3);
  CHECK(smooth.min_ratio == Approx(1.0).epsilon(1e-12));
  CHECK(smooth.max_ratio == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("xu-roach certification for lp(4) with its true exponents") {
  const NormFamily norm = NormFamily::lp(4.0, 4);
  REQUIRE(norm.sigma() == 4.0);
  const RatioReport r1 =
      xu_roach_sweep(norm, 4.0, XuRoachCheck::sigma_convex, 100000, 5);
  const RatioReport r2 =
      xu_roach_sweep(norm, 4.0, XuRoachCheck::sigma_convex, 200000, 5);
  CHECK(r1.min_ratio > 1e-3);
  CHECK(r1.min_ratio / r2.min_ratio <= 1.1);

  const RatioReport sm =
      xu_roach_sweep(norm, 4.0, XuRoachCheck::tau_smooth, 100000, 5);
  CHECK(sm.max_ratio < 1e3);
  CHECK(std::isfinite(sm.max_ratio));
}

TEST_CASE("xu-roach dual forms run on the dual family") {
  const NormFamily norm = NormFamily::lp(3.0, 3);
  const RatioReport dc =
      xu_roach_sweep(norm, 3.0, XuRoachCheck::dual_convex, 50000, 9);
  CHECK(dc.min_ratio > 1e-3);
  CHECK(dc.gamma == Approx(1.5));                      // gamma' of 3
  CHECK(dc.exponent == Approx(2.0));                   // tau' of tau=2
  const RatioReport ds =
      xu_roach_sweep(norm, 3.0, XuRoachCheck::dual_smooth, 50000, 9);
  CHECK(ds.max_ratio < 1e3);
  CHECK(ds.exponent == Approx(1.5));                   // sigma' of sigma=3
}

TEST_CASE("corrupted convexity declaration is detected") {
  // lp(4) is 4-convex, not 2-convex: pairs near an axis drive the 2-convexity
  // ratio toward zero
  const NormFamily honest = NormFamily::lp(4.0, 2);
  const NormFamily corrupted =
      honest.with_declared_exponents(honest.tau(), 2.0);
  const RatioReport r =
      xu_roach_sweep(corrupted, 2.0, XuRoachCheck::sigma_convex, 200000, 21);
  CHECK(r.min_ratio < 1e-2);
  const RatioReport ok =
      xu_roach_sweep(honest, 2.0, XuRoachCheck::sigma_convex, 200000, 21);
  CHECK(ok.min_ratio > 1e-3);
}

TEST_CASE("modulus of convexity matches the Euclidean closed form") {
  // sigma(eps) = 1 - sqrt(1 - eps^2/4) for the Euclidean norm
  for (int m : {2, 4}) {
    const NormFamily norm = NormFamily::euclidean(m);
    const double est = estimate_modulus(norm, ModulusKind::convexity, 1.0,
                                        4000, 17);
    CHECK(est == Approx(1.0 - std::sqrt(0.75)).margin(1e-3));
  }
  CHECK(estimate_modulus(NormFamily::lp(3.0, 3), ModulusKind::convexity, 0.0,
                         10, 1) == 0.0);
}

TEST_CASE("smoothness modulus scales with the declared exponent") {
  const NormFamily norm = NormFamily::lp(1.5, 4);
  // log-log slope of the estimated modulus against eps, shared directions
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int k = 2; k <= 9; ++k) {
    const double eps = std::pow(2.0, -k);
    const double est =
        estimate_modulus(norm, ModulusKind::smoothness, eps, 4096, 23);
    const double lx = std::log(eps), ly = std::log(est);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == Approx(norm.tau()).margin(0.1));
}

TEST_CASE("duality identities hold to 1e-10 over seeded samples") {
  for (double p : {1.5, 3.0}) {
    const NormFamily norm = NormFamily::lp(p, 4);
    for (double gamma : {1.5, 3.0}) {
      const IdentityReport rep = identity_sweep(norm, gamma, 20000, 13);
      CHECK(rep.max_pairing_err <= 1e-10);
      CHECK(rep.max_dual_norm_err <= 1e-10);
      CHECK(rep.max_round_trip_err <= 1e-10);
    }
  }
}
