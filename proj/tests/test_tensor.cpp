#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fgl/sweeps.hpp"
#include "fgl/tensor.hpp"
#include "test_support.hpp"

using namespace fgl;
using Catch::Approx;

namespace {

MatrixPoint random_matrix(Rng& g, int m, int n, double lo = 1e-1,
                          double hi = 1e1) {
  MatrixPoint z(m, n);
  std::vector<double> dir(static_cast<std::size_t>(m) * n);
  g.unit_sphere(dir);
  const double mag = g.log_uniform(lo, hi);
  for (std::size_t i = 0; i < dir.size(); ++i) z.a[i] = mag * dir[i];
  return z;
}

}  // namespace

TEST_CASE("column-combined norm evaluation") {
  const TensorNormSpec frob =
      TensorNormSpec::l2_columns(NormFamily::lp(2.0, 2), 2);
  MatrixPoint z(2, 2);
  z(0, 0) = 3.0;
  z(1, 0) = 4.0;
  CHECK(frob.eval(z) == Approx(5.0).epsilon(1e-15));

  // single column reduces to the base norm
  const TensorNormSpec single =
      TensorNormSpec::l2_columns(NormFamily::lp(3.0, 2), 1);
  MatrixPoint c(2, 1);
  c(0, 0) = 1.0;
  c(1, 0) = 1.0;
  CHECK(single.eval(c) == Approx(std::pow(2.0, 1.0 / 3.0)).epsilon(1e-15));

  const TensorNormSpec t3 =
      TensorNormSpec::l2_columns(NormFamily::lp(3.0, 2), 2);
  MatrixPoint w(2, 2);
  w(0, 0) = w(1, 0) = w(0, 1) = w(1, 1) = 1.0;
  const double expected = std::sqrt(2.0) * std::pow(2.0, 1.0 / 3.0);
  CHECK(t3.eval(w) == Approx(expected).epsilon(1e-14));

  // cross-check against the sup definition through duality
  Rng g(3);
  double best = 0.0;
  for (int i = 0; i < 20000; ++i) {
    MatrixPoint zs = random_matrix(g, 2, 2, 1.0, 1.0);
    double pair = 0.0;
    for (std::size_t k = 0; k < zs.a.size(); ++k) pair += zs.a[k] * w.a[k];
    best = std::max(best, std::abs(pair) / t3.eval_dual(zs));
  }
  CHECK(t3.eval(w) >= best * (1.0 - 1e-12));
  CHECK(t3.eval(w) <= best * 1.02);
}

TEST_CASE("dual tensor norm") {
  const TensorNormSpec frob =
      TensorNormSpec::l2_columns(NormFamily::lp(2.0, 3), 2);
  Rng g(5);
  const MatrixPoint z = random_matrix(g, 3, 2);
  CHECK(frob.eval_dual(z) == Approx(frob.eval(z)).epsilon(1e-13));

  MatrixPoint zero(3, 2);
  CHECK(frob.eval_dual(zero) == 0.0);

  // brute-force sup oracle for the lp(3) base: maximize <zs,z> over random
  // unit-F matrices
  const TensorNormSpec t3 =
      TensorNormSpec::l2_columns(NormFamily::lp(3.0, 2), 2);
  for (int trial = 0; trial < 5; ++trial) {
    const MatrixPoint zs = random_matrix(g, 2, 2);
    const double claimed = t3.eval_dual(zs);
    double best = 0.0;
    for (int i = 0; i < 10000; ++i) {
      MatrixPoint z2 = random_matrix(g, 2, 2, 1.0, 1.0);
      double pair = 0.0;
      for (std::size_t k = 0; k < 4; ++k) pair += zs.a[k] * z2.a[k];
      best = std::max(best, std::abs(pair) / t3.eval(z2));
    }
    CHECK(claimed >= best * (1.0 - 1e-12));
    CHECK(claimed <= best * 1.02);
  }
}

TEST_CASE("tensor norm axioms") {
  Rng g(7);
  for (const auto& spec :
       {TensorNormSpec::l2_columns(NormFamily::lp(3.0, 3), 2),
        TensorNormSpec::l2_columns(NormFamily::lp(1.5, 3), 2),
        TensorNormSpec::flat_lp(NormFamily::lp(3.0, 3), 3.0, 2)}) {
    for (int trial = 0; trial < 100; ++trial) {
      const MatrixPoint x = random_matrix(g, 3, 2);
      const MatrixPoint y = random_matrix(g, 3, 2);
      const double t = g.log_uniform(1e-3, 1e3);
      MatrixPoint tx = x, sum = x;
      for (double& v : tx.a) v *= t;
      for (std::size_t k = 0; k < sum.a.size(); ++k) sum.a[k] += y.a[k];
      CHECK(spec.eval(tx) == Approx(t * spec.eval(x)).epsilon(1e-12));
      CHECK(spec.eval(sum) <= (spec.eval(x) + spec.eval(y)) * (1.0 + 1e-12));

      // Fenchel inequality against the dual norm
      double pair = 0.0;
      for (std::size_t k = 0; k < x.a.size(); ++k) pair += x.a[k] * y.a[k];
      CHECK(std::abs(pair) <=
            spec.eval_dual(y) * spec.eval(x) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("tensor duality map") {
  SECTION("gamma=2 Euclidean base is the identity on matrices") {
    const TensorNormSpec frob =
        TensorNormSpec::l2_columns(NormFamily::lp(2.0, 3), 2);
    Rng g(9);
    const MatrixPoint z = random_matrix(g, 3, 2);
    const MatrixPoint j = frob.duality_map(2.0, z);
    for (std::size_t k = 0; k < z.a.size(); ++k)
      CHECK(j.a[k] == Approx(z.a[k]).epsilon(1e-13));
  }

  SECTION("origin maps to zero") {
    const TensorNormSpec t =
        TensorNormSpec::l2_columns(NormFamily::lp(3.0, 2), 2);
    const MatrixPoint j = t.duality_map(3.0, MatrixPoint(2, 2));
    for (double v : j.a) CHECK(v == 0.0);
  }

  SECTION("matches finite differences of F^gamma/gamma") {
    Rng g(13);
    for (const auto& spec :
         {TensorNormSpec::l2_columns(NormFamily::lp(3.0, 2), 2),
          TensorNormSpec::l2_columns(NormFamily::lp(1.5, 2), 2),
          TensorNormSpec::flat_lp(NormFamily::lp(3.0, 2), 3.0, 2)}) {
      for (double gamma : {2.0, 3.0}) {
        const MatrixPoint z = random_matrix(g, 2, 2, 0.5, 2.0);
        const MatrixPoint j = spec.duality_map(gamma, z);
        auto phi = [&](const std::vector<double>& v) {
          return std::pow(spec.eval_span(v), gamma) / gamma;
        };
        const double scale = spec.eval_dual(j);
        for (std::size_t k = 0; k < z.a.size(); ++k) {
          const double fd = testing::central_difference(phi, z.a, k, 1e-6);
          CHECK(j.a[k] == Approx(fd).margin(1e-6 * scale));
        }
      }
    }
  }

  SECTION("duality pair identities") {
    Rng g(17);
    const TensorNormSpec spec =
        TensorNormSpec::l2_columns(NormFamily::lp(1.5, 3), 2);
    for (double gamma : {1.5, 2.0, 4.0}) {
      for (int trial = 0; trial < 40; ++trial) {
        const MatrixPoint z = random_matrix(g, 3, 2, 1e-3, 1e3);
        const MatrixPoint j = spec.duality_map(gamma, z);
        const double f = spec.eval(z);
        double pair = 0.0;
        for (std::size_t k = 0; k < z.a.size(); ++k) pair += j.a[k] * z.a[k];
        CHECK(pair == Approx(std::pow(f, gamma)).epsilon(1e-12));
        CHECK(spec.eval_dual(j) ==
              Approx(std::pow(f, gamma - 1.0)).epsilon(1e-12));
      }
    }
  }

  SECTION("column maps coincide with the combined map exactly at gamma=2") {
    Rng g(19);
    const NormFamily base = NormFamily::lp(3.0, 3);
    const TensorNormSpec spec = TensorNormSpec::l2_columns(base, 2);
    const MatrixPoint z = random_matrix(g, 3, 2);
    const MatrixPoint j = spec.duality_map(2.0, z);
    for (int c = 0; c < 2; ++c) {
      Vec col{0, 0, 0};
      col.c.assign(z.column(c).begin(), z.column(c).end());
      const DualVec jc = base.duality_map(2.0, col);
      for (int r = 0; r < 3; ++r)
        CHECK(j(r, c) == Approx(jc[r]).epsilon(1e-12));
    }
  }

  SECTION("round trip through the dual family") {
    Rng g(23);
    for (const auto& spec :
         {TensorNormSpec::l2_columns(NormFamily::lp(3.0, 2), 2),
          TensorNormSpec::flat_lp(NormFamily::lp(3.0, 2), 1.5, 2)}) {
      for (double gamma : {1.5, 3.0}) {
        const MatrixPoint z = random_matrix(g, 2, 2, 1e-2, 1e2);
        const MatrixPoint j = spec.duality_map(gamma, z);
        const MatrixPoint back = spec.inverse_duality_map(gamma, j);
        const double scale = spec.eval(z);
        for (std::size_t k = 0; k < z.a.size(); ++k)
          CHECK(back.a[k] == Approx(z.a[k]).margin(1e-10 * scale));
      }
    }
  }
}

TEST_CASE("rank-one identity") {
  const TensorNormSpec spec =
      TensorNormSpec::l2_columns(NormFamily::lp(3.0, 3), 2);

  Vec e1{1.0, 0.0, 0.0};
  const auto [lhs1, rhs1] = rank_one_check(
      TensorNormSpec::l2_columns(NormFamily::lp(3.0, 3), 3), e1,
      std::vector<double>{1.0, 0.0, 0.0});
  CHECK(lhs1 == 1.0);
  CHECK(rhs1 == 1.0);

  Vec zero{0.0, 0.0, 0.0};
  const auto [lz, rz] =
      rank_one_check(spec, zero, std::vector<double>{0.3, -0.7});
  CHECK(lz == 0.0);
  CHECK(rz == 0.0);

  Rng g(29);
  for (int trial = 0; trial < 200; ++trial) {
    Vec x{0, 0, 0};
    x.c = testing::random_point(g, 3, 1e-3, 1e3);
    std::vector<double> xi = testing::random_point(g, 2, 1e-3, 1e3);
    const auto [lhs, rhs] = rank_one_check(spec, x, xi);
    CHECK(lhs == Approx(rhs).epsilon(1e-12));
  }

  CHECK_THROWS_AS(
      rank_one_check(TensorNormSpec::flat_lp(NormFamily::lp(3.0, 3), 3.0, 2),
                     e1, std::vector<double>{1.0, 0.0}),
      std::invalid_argument);
}

TEST_CASE("dual representation identity") {
  Rng g(31);

  SECTION("gamma=2 reduces both sides to the same expression") {
    const TensorNormSpec spec =
        TensorNormSpec::l2_columns(NormFamily::lp(3.0, 2), 2);
    const MatrixPoint z = random_matrix(g, 2, 2);
    const auto [lhs, rhs] = dual_representation_check(spec, 2.0, 1.5, z);
    for (std::size_t k = 0; k < lhs.a.size(); ++k)
      CHECK(lhs.a[k] == Approx(rhs.a[k]).epsilon(1e-12));
  }

  SECTION("Euclidean gamma=4 tau=2 gives F(z) z on both sides") {
    const TensorNormSpec frob =
        TensorNormSpec::l2_columns(NormFamily::lp(2.0, 2), 2);
    const MatrixPoint z = random_matrix(g, 2, 2);
    const double f = frob.eval(z);
    const auto [lhs, rhs] = dual_representation_check(frob, 4.0, 2.0, z);
    for (std::size_t k = 0; k < z.a.size(); ++k) {
      CHECK(lhs.a[k] == Approx(f * z.a[k]).epsilon(1e-12));
      CHECK(rhs.a[k] == Approx(f * z.a[k]).epsilon(1e-12));
    }
  }

  SECTION("general base and exponents agree to 1e-10") {
    const TensorNormSpec spec =
        TensorNormSpec::l2_columns(NormFamily::lp(3.0, 3), 2);
    for (int trial = 0; trial < 100; ++trial) {
      const MatrixPoint z = random_matrix(g, 3, 2, 1e-2, 1e2);
      const auto [lhs, rhs] = dual_representation_check(spec, 3.0, 1.5, z);
      const double scale = spec.eval_dual(lhs);
      for (std::size_t k = 0; k < lhs.a.size(); ++k)
        CHECK(lhs.a[k] == Approx(rhs.a[k]).margin(1e-10 * scale));
    }
  }

  SECTION("zero point is rejected") {
    const TensorNormSpec spec =
        TensorNormSpec::l2_columns(NormFamily::lp(3.0, 2), 2);
    CHECK_THROWS_AS(dual_representation_check(spec, 3.0, 1.5, MatrixPoint(2, 2)),
                    std::domain_error);
  }
}

TEST_CASE("tensor norms inherit convexity and smoothness exponents") {
  // the inequality sweeps run directly on the tensor norm
  const TensorNormSpec spec =
      TensorNormSpec::l2_columns(NormFamily::lp(3.0, 2), 2);
  REQUIRE(spec.tau() == 2.0);
  REQUIRE(spec.sigma() == 3.0);

  const RatioReport conv =
      xu_roach_sweep(spec, 3.0, XuRoachCheck::sigma_convex, 60000, 37);
  CHECK(conv.min_ratio > 1e-3);
  const RatioReport smooth =
      xu_roach_sweep(spec, 3.0, XuRoachCheck::tau_smooth, 60000, 37);
  CHECK(smooth.max_ratio < 1e3);

  const TensorNormSpec flat =
      TensorNormSpec::flat_lp(NormFamily::lp(2.0, 2), 1.5, 2);
  CHECK(flat.tau() == 1.5);
  CHECK(flat.sigma() == 2.0);
  const RatioReport fconv =
      xu_roach_sweep(flat, 2.0, XuRoachCheck::sigma_convex, 60000, 41);
  CHECK(fconv.min_ratio > 1e-3);
}

TEST_CASE("tensor shape validation") {
  const TensorNormSpec spec =
      TensorNormSpec::l2_columns(NormFamily::lp(2.0, 2), 2);
  CHECK_THROWS_AS(spec.eval(MatrixPoint(3, 2)), std::invalid_argument);
  CHECK_THROWS_AS(spec.eval(MatrixPoint(2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(spec.duality_map(1.0, MatrixPoint(2, 2)),
                  std::invalid_argument);
}
