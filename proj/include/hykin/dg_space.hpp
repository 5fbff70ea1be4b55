#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "hykin/mesh.hpp"
#include "hykin/nodal_basis.hpp"

namespace hykin {

/// Mesh plus one nodal basis per axis. Nodes inside a cell are numbered
/// with axis 0 fastest: node = k0 + (K0+1) * k1.
template <int Dim>
class DgSpace {
 public:
  DgSpace() = default;

  DgSpace(Mesh<Dim> mesh, std::array<int, Dim> order) : mesh_(std::move(mesh)) {
    nodes_per_cell_ = 1;
    for (int d = 0; d < Dim; ++d) {
      basis_[d] = NodalBasis(order[d]);
      nodes_per_cell_ *= basis_[d].size();
    }
    build_node_maps();
  }

  DgSpace(Mesh<Dim> mesh, int order) : DgSpace(std::move(mesh), uniform_order(order)) {}

  const Mesh<Dim>& mesh() const { return mesh_; }
  const NodalBasis& basis(int d) const { return basis_[d]; }
  int order(int d) const { return basis_[d].order(); }
  int cells() const { return mesh_.size(); }
  int nodes_per_cell() const { return nodes_per_cell_; }
  int dofs() const { return cells() * nodes_per_cell_; }
  int dof(int c, int n) const { return c * nodes_per_cell_ + n; }

  std::array<int, Dim> node_index(int n) const {
    std::array<int, Dim> k{};
    k[0] = n % basis_[0].size();
    if constexpr (Dim == 2) k[1] = n / basis_[0].size();
    return k;
  }

  int node(const std::array<int, Dim>& k) const {
    if constexpr (Dim == 1) {
      return k[0];
    } else {
      return k[0] + basis_[0].size() * k[1];
    }
  }

  /// Number of face quadrature nodes on faces normal to `d`.
  int face_nodes(int d) const {
    if constexpr (Dim == 1) {
      (void)d;
      return 1;
    } else {
      return basis_[1 - d].size();
    }
  }

  /// Cell node with index `l` along axis d and transverse face node `t`.
  int line_node(int d, int l, int t) const { return line_nodes_[d][t * basis_[d].size() + l]; }
  const int* line(int d, int t) const { return line_nodes_[d].data() + t * basis_[d].size(); }

  /// Node index along axis d and the transverse face-node index of node n.
  int along(int d, int n) const { return node_index(n)[d]; }
  int transverse(int d, int n) const {
    if constexpr (Dim == 1) {
      (void)d;
      (void)n;
      return 0;
    } else {
      return node_index(n)[1 - d];
    }
  }

  std::array<double, Dim> node_position(int c, int n) const {
    const auto cidx = mesh_.cell_index(c);
    const auto k = node_index(n);
    std::array<double, Dim> x{};
    for (int d = 0; d < Dim; ++d) {
      const Axis& a = mesh_.axis(d);
      x[d] = a.center(cidx[d]) + a.width(cidx[d]) * basis_[d].nodes()[k[d]];
    }
    return x;
  }

  /// Physical quadrature weight of node n in cell c (weights of a cell sum to its volume).
  double node_weight(int c, int n) const {
    const auto cidx = mesh_.cell_index(c);
    const auto k = node_index(n);
    double w = 1.0;
    for (int d = 0; d < Dim; ++d) w *= basis_[d].weights()[k[d]] * mesh_.axis(d).width(cidx[d]);
    return w;
  }

  /// Reference weight (product of 1D Gauss weights, sums to 1 per cell).
  double reference_weight(int n) const {
    const auto k = node_index(n);
    double w = 1.0;
    for (int d = 0; d < Dim; ++d) w *= basis_[d].weights()[k[d]];
    return w;
  }

  /// Position of a face node: the face is normal to d, at coordinate
  /// `normal_coord`, adjacent to cell c, transverse node t.
  std::array<double, Dim> face_position(int c, int d, int side, int t) const {
    const auto cidx = mesh_.cell_index(c);
    std::array<double, Dim> x{};
    const Axis& a = mesh_.axis(d);
    x[d] = side == 0 ? a.edge(cidx[d]) : a.edge(cidx[d] + 1);
    if constexpr (Dim == 2) {
      const int e = 1 - d;
      const Axis& b = mesh_.axis(e);
      x[e] = b.center(cidx[e]) + b.width(cidx[e]) * basis_[e].nodes()[t];
    } else {
      (void)t;
    }
    return x;
  }

  /// Face quadrature weight (transverse Gauss weight times transverse width).
  double face_weight(int c, int d, int t) const {
    if constexpr (Dim == 1) {
      (void)c;
      (void)d;
      (void)t;
      return 1.0;
    } else {
      const int e = 1 - d;
      return basis_[e].weights()[t] * mesh_.axis(e).width(mesh_.cell_index(c)[e]);
    }
  }

  /// Trace of nodal values `q` (pointer to the cell's first node, stride
  /// between nodes `stride`) on side 0 (lower) or 1 (upper) of axis d at face node t.
  double trace(const double* q, int d, int side, int t, std::ptrdiff_t stride = 1) const {
    const NodalBasis& b = basis_[d];
    const auto& phi = side == 0 ? b.left_trace() : b.right_trace();
    double s = 0.0;
    for (int l = 0; l < b.size(); ++l) s += phi[l] * q[line_node(d, l, t) * stride];
    return s;
  }

  /// Evaluate the cell polynomial with nodal values q at reference point xi.
  double evaluate(const double* q, const std::array<double, Dim>& xi) const {
    double s = 0.0;
    for (int n = 0; n < nodes_per_cell_; ++n) {
      const auto k = node_index(n);
      double phi = 1.0;
      for (int d = 0; d < Dim; ++d) phi *= basis_[d].value(k[d], xi[d]);
      s += phi * q[n];
    }
    return s;
  }

  /// Physical derivative along axis d of the cell polynomial at reference point xi.
  double derivative(const double* q, int c, int d, const std::array<double, Dim>& xi) const {
    double s = 0.0;
    for (int n = 0; n < nodes_per_cell_; ++n) {
      const auto k = node_index(n);
      double phi = 1.0;
      for (int e = 0; e < Dim; ++e)
        phi *= (e == d) ? basis_[e].derivative(k[e], xi[e]) : basis_[e].value(k[e], xi[e]);
      s += phi * q[n];
    }
    return s / mesh_.width(c, d);
  }

 private:
  static std::array<int, Dim> uniform_order(int K) {
    std::array<int, Dim> o{};
    o.fill(K);
    return o;
  }

  void build_node_maps() {
    for (int d = 0; d < Dim; ++d) {
      const int nl = basis_[d].size();
      const int nt = face_nodes(d);
      line_nodes_[d].assign(nl * nt, 0);
      for (int t = 0; t < nt; ++t)
        for (int l = 0; l < nl; ++l) {
          std::array<int, Dim> k{};
          k[d] = l;
          if constexpr (Dim == 2) k[1 - d] = t;
          line_nodes_[d][t * nl + l] = node(k);
        }
    }
  }

  Mesh<Dim> mesh_;
  std::array<NodalBasis, Dim> basis_;
  int nodes_per_cell_ = 1;
  std::array<std::vector<int>, Dim> line_nodes_;
};

/// Nodal values of one scalar unknown over all cells, dense (cell, node) layout.
class Field {
 public:
  Field() = default;
  Field(int cells, int nodes_per_cell, double value = 0.0)
      : nodes_per_cell_(nodes_per_cell), values_(static_cast<std::size_t>(cells) * nodes_per_cell, value) {}

  template <int Dim>
  explicit Field(const DgSpace<Dim>& space, double value = 0.0) : Field(space.cells(), space.nodes_per_cell(), value) {}

  int nodes_per_cell() const { return nodes_per_cell_; }
  std::size_t size() const { return values_.size(); }
  int cells() const { return nodes_per_cell_ == 0 ? 0 : static_cast<int>(values_.size()) / nodes_per_cell_; }

  double& operator()(int c, int n) { return values_[static_cast<std::size_t>(c) * nodes_per_cell_ + n]; }
  double operator()(int c, int n) const { return values_[static_cast<std::size_t>(c) * nodes_per_cell_ + n]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  double* cell(int c) { return values_.data() + static_cast<std::size_t>(c) * nodes_per_cell_; }
  const double* cell(int c) const { return values_.data() + static_cast<std::size_t>(c) * nodes_per_cell_; }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  bool operator==(const Field&) const = default;

 private:
  int nodes_per_cell_ = 0;
  std::vector<double> values_;
};

/// Nodal interpolation of a pointwise function at the mapped Gauss nodes.
template <int Dim, class F>
Field project(const F& f, const DgSpace<Dim>& space) {
  Field out(space);
  for (int c = 0; c < space.cells(); ++c)
    for (int n = 0; n < space.nodes_per_cell(); ++n) out(c, n) = f(space.node_position(c, n));
  return out;
}

/// Left/right limits at one interface node.
struct TracePair {
  double minus;
  double plus;
};

/// Traces at every interior interface normal to axis d, ordered by
/// (transverse cell, interface position, face node). Boundary faces are omitted.
template <int Dim>
std::vector<TracePair> edge_traces(const Field& field, const DgSpace<Dim>& space, int d = 0) {
  std::vector<TracePair> out;
  const Mesh<Dim>& mesh = space.mesh();
  const int nd = mesh.cells_along(d);
  const int ntrans = (Dim == 1) ? 1 : mesh.cells_along(1 - d);
  for (int jt = 0; jt < ntrans; ++jt) {
    for (int i = 0; i + 1 < nd; ++i) {
      std::array<int, Dim> lo{}, hi{};
      lo[d] = i;
      hi[d] = i + 1;
      if constexpr (Dim == 2) lo[1 - d] = hi[1 - d] = jt;
      const int cl = mesh.cell(lo), cr = mesh.cell(hi);
      for (int t = 0; t < space.face_nodes(d); ++t)
        out.push_back({space.trace(field.cell(cl), d, 1, t), space.trace(field.cell(cr), d, 0, t)});
    }
  }
  return out;
}

}  // namespace hykin
