#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "fgl/tensor.hpp"

namespace fgl {

// Uniform tensor grid on the unit interval/square. Nodes sit at i*h with
// h = 1/(N-1); cells are the (N-1)^dim boxes between adjacent nodes.
struct Grid {
  int dim = 1;
  int nodes_per_side = 3;

  Grid() = default;
  Grid(int dimension, int n_per_side)
      : dim(dimension), nodes_per_side(n_per_side) {
    if (dim != 1 && dim != 2)
      throw std::invalid_argument("grid: dim must be 1 or 2");
    if (nodes_per_side < 3)
      throw std::invalid_argument("grid: need at least 3 nodes per side");
  }

  double spacing() const { return 1.0 / (nodes_per_side - 1); }
  int node_count() const {
    return dim == 1 ? nodes_per_side : nodes_per_side * nodes_per_side;
  }
  int cells_per_side() const { return nodes_per_side - 1; }
  int cell_count() const {
    const int c = cells_per_side();
    return dim == 1 ? c : c * c;
  }
  double cell_measure() const { return std::pow(spacing(), dim); }

  int node_index(int i, int j = 0) const {
    return dim == 1 ? i : j * nodes_per_side + i;
  }
  int cell_index(int i, int j = 0) const {
    return dim == 1 ? i : j * cells_per_side() + i;
  }
  std::array<int, 2> node_ij(int node) const {
    if (dim == 1) return {node, 0};
    return {node % nodes_per_side, node / nodes_per_side};
  }
  std::array<int, 2> cell_ij(int cell) const {
    if (dim == 1) return {cell, 0};
    return {cell % cells_per_side(), cell / cells_per_side()};
  }

  std::array<double, 2> node_coords(int node) const {
    const auto ij = node_ij(node);
    return {ij[0] * spacing(), dim == 2 ? ij[1] * spacing() : 0.0};
  }
  std::array<double, 2> cell_center(int cell) const {
    const auto ij = cell_ij(cell);
    return {(ij[0] + 0.5) * spacing(),
            dim == 2 ? (ij[1] + 0.5) * spacing() : 0.0};
  }

  bool on_boundary(int node) const {
    const auto ij = node_ij(node);
    if (ij[0] == 0 || ij[0] == nodes_per_side - 1) return true;
    return dim == 2 && (ij[1] == 0 || ij[1] == nodes_per_side - 1);
  }

  // distance from the domain boundary
  double node_margin(int node) const {
    const auto c = node_coords(node);
    double d = std::min(c[0], 1.0 - c[0]);
    if (dim == 2) d = std::min({d, c[1], 1.0 - c[1]});
    return d;
  }
  double cell_margin(int cell) const {
    const auto c = cell_center(cell);
    double d = std::min(c[0], 1.0 - c[0]);
    if (dim == 2) d = std::min({d, c[1], 1.0 - c[1]});
    return d;
  }

  bool operator==(const Grid& o) const {
    return dim == o.dim && nodes_per_side == o.nodes_per_side;
  }
};

/// Node-indexed R^m-valued function.
struct Field {
  Grid grid;
  int m = 1;
  std::vector<double> v;  // node-major blocks of length m

  Field() = default;
  Field(const Grid& g, int components)
      : grid(g), m(components),
        v(static_cast<std::size_t>(g.node_count()) * components, 0.0) {
    if (m < 1) throw std::invalid_argument("field: m >= 1 required");
  }

  std::span<double> node(int i) {
    return {v.data() + static_cast<std::size_t>(i) * m,
            static_cast<std::size_t>(m)};
  }
  std::span<const double> node(int i) const {
    return {v.data() + static_cast<std::size_t>(i) * m,
            static_cast<std::size_t>(m)};
  }
};

/// Cell-indexed m x dim matrix data (values of a discrete gradient).
struct GradientField {
  Grid grid;
  int m = 1;
  std::vector<double> v;  // cell-major blocks of length m*dim, column-major

  GradientField() = default;
  GradientField(const Grid& g, int components)
      : grid(g), m(components),
        v(static_cast<std::size_t>(g.cell_count()) * components * g.dim, 0.0) {}

  int block() const { return m * grid.dim; }
  std::span<double> cell(int c) {
    return {v.data() + static_cast<std::size_t>(c) * block(),
            static_cast<std::size_t>(block())};
  }
  std::span<const double> cell(int c) const {
    return {v.data() + static_cast<std::size_t>(c) * block(),
            static_cast<std::size_t>(block())};
  }
};

// Per-cell forward differences, averaged over the cell's parallel edges in
// each direction; exact on affine fields.
inline GradientField forward_gradient(const Field& u) {
  const Grid& g = u.grid;
  GradientField out(g, u.m);
  const double h = g.spacing();
  const int m = u.m;

  if (g.dim == 1) {
    for (int c = 0; c < g.cell_count(); ++c) {
      auto a = u.node(c);
      auto b = u.node(c + 1);
      auto dst = out.cell(c);
      for (int r = 0; r < m; ++r) dst[r] = (b[r] - a[r]) / h;
    }
    return out;
  }

  const int N = g.nodes_per_side;
  for (int j = 0; j < N - 1; ++j) {
    for (int i = 0; i < N - 1; ++i) {
      auto n00 = u.node(g.node_index(i, j));
      auto n10 = u.node(g.node_index(i + 1, j));
      auto n01 = u.node(g.node_index(i, j + 1));
      auto n11 = u.node(g.node_index(i + 1, j + 1));
      auto dst = out.cell(g.cell_index(i, j));
      for (int r = 0; r < m; ++r) {
        dst[r] = ((n10[r] - n00[r]) + (n11[r] - n01[r])) / (2.0 * h);
        dst[m + r] = ((n01[r] - n00[r]) + (n11[r] - n10[r])) / (2.0 * h);
      }
    }
  }
  return out;
}

// Exact transpose of forward_gradient in the unweighted inner products:
// sum_cells <grad u, G> == sum_nodes <u, adjoint_divergence(G)> for every u.
inline Field adjoint_divergence(const GradientField& G) {
  const Grid& g = G.grid;
  Field out(g, G.m);
  const double h = g.spacing();
  const int m = G.m;

  if (g.dim == 1) {
    for (int c = 0; c < g.cell_count(); ++c) {
      auto src = G.cell(c);
      auto a = out.node(c);
      auto b = out.node(c + 1);
      for (int r = 0; r < m; ++r) {
        a[r] -= src[r] / h;
        b[r] += src[r] / h;
      }
    }
    return out;
  }

  const int N = g.nodes_per_side;
  for (int j = 0; j < N - 1; ++j) {
    for (int i = 0; i < N - 1; ++i) {
      auto src = G.cell(g.cell_index(i, j));
      auto n00 = out.node(g.node_index(i, j));
      auto n10 = out.node(g.node_index(i + 1, j));
      auto n01 = out.node(g.node_index(i, j + 1));
      auto n11 = out.node(g.node_index(i + 1, j + 1));
      for (int r = 0; r < m; ++r) {
        const double gx = src[r] / (2.0 * h);
        const double gy = src[m + r] / (2.0 * h);
        n00[r] += -gx - gy;
        n10[r] += gx - gy;
        n01[r] += -gx + gy;
        n11[r] += gx + gy;
      }
    }
  }
  return out;
}

inline std::vector<int> interior_nodes(const Grid& g, double margin) {
  std::vector<int> idx;
  for (int n = 0; n < g.node_count(); ++n)
    if (g.node_margin(n) >= margin - 1e-12) idx.push_back(n);
  return idx;
}

/// Restriction of a field to the nodes at distance >= margin from the boundary.
struct SubField {
  std::vector<int> nodes;
  std::vector<std::array<double, 2>> coords;
  std::vector<double> values;  // node-major blocks of length m
  int m = 1;
};

inline SubField restrict_interior(const Field& f, double margin) {
  if (!(margin < 0.5))
    throw std::invalid_argument("restrict_interior: margin must be < 1/2");
  SubField out;
  out.m = f.m;
  out.nodes = interior_nodes(f.grid, margin);
  if (out.nodes.empty())
    throw std::runtime_error("restrict_interior: empty restriction");
  for (int n : out.nodes) {
    out.coords.push_back(f.grid.node_coords(n));
    auto vals = f.node(n);
    out.values.insert(out.values.end(), vals.begin(), vals.end());
  }
  return out;
}

}  // namespace fgl
