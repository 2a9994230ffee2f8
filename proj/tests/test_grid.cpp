#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "fgl/grid.hpp"
#include "fgl/rng.hpp"

using namespace fgl;
using Catch::Approx;

namespace {

Field affine_field(const Grid& g, int m, const std::vector<double>& slope,
                   const std::vector<double>& offset) {
  Field u(g, m);
  for (int n = 0; n < g.node_count(); ++n) {
    const auto x = g.node_coords(n);
    auto row = u.node(n);
    for (int a = 0; a < m; ++a) {
      row[a] = offset[static_cast<std::size_t>(a)];
      for (int k = 0; k < g.dim; ++k)
        row[a] += slope[static_cast<std::size_t>(a) * g.dim + k] * x[k];
    }
  }
  return u;
}

}  // namespace

TEST_CASE("grid indexing and geometry") {
  const Grid g1(1, 9);
  CHECK(g1.spacing() == Approx(0.125));
  CHECK(g1.node_count() == 9);
  CHECK(g1.cell_count() == 8);
  CHECK(g1.on_boundary(0));
  CHECK(g1.on_boundary(8));
  CHECK_FALSE(g1.on_boundary(4));

  const Grid g2(2, 5);
  CHECK(g2.node_count() == 25);
  CHECK(g2.cell_count() == 16);
  CHECK(g2.cell_measure() == Approx(0.0625));
  CHECK(g2.on_boundary(g2.node_index(0, 3)));
  CHECK_FALSE(g2.on_boundary(g2.node_index(2, 2)));
  const auto c = g2.cell_center(g2.cell_index(1, 2));
  CHECK(c[0] == Approx(0.375));
  CHECK(c[1] == Approx(0.625));

  CHECK_THROWS_AS(Grid(3, 5), std::invalid_argument);
  CHECK_THROWS_AS(Grid(1, 2), std::invalid_argument);
}

TEST_CASE("forward gradient is exact on affine fields") {
  for (int dim : {1, 2}) {
    const Grid g(dim, 9);
    const int m = 2;
    const std::vector<double> slope = dim == 1 ? std::vector<double>{2.0, -3.0}
                                               : std::vector<double>{2.0, -1.0,
                                                                     0.5, 3.0};
    const Field u = affine_field(g, m, slope, {0.7, -0.2});
    const GradientField du = forward_gradient(u);
    for (int c = 0; c < g.cell_count(); ++c) {
      auto blk = du.cell(c);
      for (int a = 0; a < m; ++a)
        for (int k = 0; k < dim; ++k)
          CHECK(blk[static_cast<std::size_t>(k) * m + a] ==
                Approx(slope[static_cast<std::size_t>(a) * dim + k])
                    .margin(1e-13));
    }
  }
}

TEST_CASE("forward gradient of a constant vanishes") {
  const Grid g(2, 7);
  Field u(g, 3);
  for (double& v : u.v) v = 4.2;
  const GradientField du = forward_gradient(u);
  for (double v : du.v) CHECK(v == 0.0);
}

TEST_CASE("forward gradient second-order accuracy at cell midpoints") {
  const Grid g(1, 129);
  Field u(g, 1);
  for (int n = 0; n < g.node_count(); ++n)
    u.node(n)[0] = std::sin(std::numbers::pi * g.node_coords(n)[0]);
  const GradientField du = forward_gradient(u);
  double worst = 0.0;
  for (int c = 0; c < g.cell_count(); ++c) {
    const double xm = g.cell_center(c)[0];
    const double exact = std::numbers::pi * std::cos(std::numbers::pi * xm);
    worst = std::max(worst, std::abs(du.cell(c)[0] - exact));
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("adjoint identity: discrete integration by parts") {
  Rng g(55);
  for (int dim : {1, 2}) {
    const Grid grid(dim, 9);
    const int m = 2;
    for (int trial = 0; trial < 50; ++trial) {
      Field u(grid, m);
      for (int n = 0; n < grid.node_count(); ++n) {
        if (grid.on_boundary(n)) continue;  // compactly supported test field
        for (auto& v : u.node(n)) v = g.uniform(-1.0, 1.0);
      }
      GradientField G(grid, m);
      for (double& v : G.v) v = g.uniform(-1.0, 1.0);

      const GradientField du = forward_gradient(u);
      double lhs = 0.0;
      for (std::size_t i = 0; i < du.v.size(); ++i) lhs += du.v[i] * G.v[i];
      const Field aG = adjoint_divergence(G);
      double rhs = 0.0;
      for (std::size_t i = 0; i < aG.v.size(); ++i) rhs += aG.v[i] * u.v[i];
      CHECK(lhs == Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("adjoint of zero and of constants") {
  const Grid g(1, 9);
  GradientField zero(g, 2);
  const Field a0 = adjoint_divergence(zero);
  for (double v : a0.v) CHECK(v == 0.0);

  // constant flux has zero discrete divergence at interior nodes
  GradientField c(g, 1);
  for (double& v : c.v) v = 3.14;
  const Field ac = adjoint_divergence(c);
  for (int n = 1; n < g.node_count() - 1; ++n)
    CHECK(ac.node(n)[0] == Approx(0.0).margin(1e-12));
  CHECK(ac.node(0)[0] != 0.0);  // boundary picks up the flux
}

TEST_CASE("grid operators are linear") {
  Rng rng(66);
  const Grid g(2, 7);
  const int m = 2;
  Field u(g, m), v(g, m);
  for (double& x : u.v) x = rng.uniform(-1, 1);
  for (double& x : v.v) x = rng.uniform(-1, 1);
  const double a = 1.7, b = -0.4;

  Field lin(g, m);
  for (std::size_t i = 0; i < lin.v.size(); ++i)
    lin.v[i] = a * u.v[i] + b * v.v[i];
  const GradientField dlin = forward_gradient(lin);
  const GradientField du = forward_gradient(u);
  const GradientField dv = forward_gradient(v);
  for (std::size_t i = 0; i < dlin.v.size(); ++i)
    CHECK(dlin.v[i] == Approx(a * du.v[i] + b * dv.v[i]).margin(1e-12));
}

TEST_CASE("interior restriction") {
  const Grid g(1, 9);
  Field u(g, 1);
  for (int n = 0; n < g.node_count(); ++n)
    u.node(n)[0] = g.node_coords(n)[0];

  SECTION("zero margin keeps all nodes") {
    const SubField all = restrict_interior(u, 0.0);
    CHECK(all.nodes.size() == 9);
  }

  SECTION("margin 0.25 keeps the centered band") {
    const SubField mid = restrict_interior(u, 0.25);
    REQUIRE(mid.nodes.size() == 5);
    CHECK(mid.coords.front()[0] == Approx(0.25));
    CHECK(mid.coords.back()[0] == Approx(0.75));
  }

  SECTION("retained area tracks (1-2 margin)^dim within a cell layer") {
    for (int dim : {1, 2}) {
      const Grid gg(dim, 33);
      Field w(gg, 1);
      const double margin = 0.3;
      const SubField sub = restrict_interior(w, margin);
      const double frac = static_cast<double>(sub.nodes.size()) /
                          gg.node_count();
      const double target = std::pow(1.0 - 2.0 * margin, dim);
      CHECK(std::abs(frac - target) <
            2.0 * dim * gg.spacing() + 2.0 / gg.nodes_per_side);
    }
  }

  SECTION("empty restriction and bad margin are rejected") {
    CHECK_THROWS_AS(restrict_interior(u, 0.5), std::invalid_argument);
    const Grid tiny(1, 3);
    Field t(tiny, 1);
    CHECK_THROWS_AS(restrict_interior(t, 0.49), std::runtime_error);
  }
}
