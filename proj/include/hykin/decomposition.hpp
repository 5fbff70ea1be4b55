#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hykin/boundary.hpp"
#include "hykin/dg_space.hpp"
#include "hykin/errors.hpp"
#include "hykin/reduced.hpp"

namespace hykin {

enum class Region : char { Kinetic = 'K', Fluid = 'F' };

struct DecompositionConfig {
  double eta0 = 1e-3;
  double delta0 = 1e-3;
  double forced_band = 0.0;
  int period = 1;

  void validate() const {
    if (!(eta0 > 0.0)) throw ConfigurationError("eta0 must be positive");
    if (!(delta0 > 0.0)) throw ConfigurationError("delta0 must be positive");
    if (forced_band < 0.0) throw ConfigurationError("forced_band must be non-negative");
    if (period < 1) throw ConfigurationError("re-evaluation period must be >= 1");
  }
};

/// Per-cell model label, forced-kinetic flags and step of the last change.
struct RegionMap {
  std::vector<Region> label;
  std::vector<char> forced;
  std::vector<long> last_change;

  RegionMap() = default;
  RegionMap(int cells, Region initial) : label(cells, initial), forced(cells, 0), last_change(cells, 0) {}

  int size() const { return static_cast<int>(label.size()); }
  bool kinetic(int c) const { return label[c] == Region::Kinetic; }

  std::vector<char> mask(Region r) const {
    std::vector<char> m(label.size());
    for (std::size_t c = 0; c < label.size(); ++c) m[c] = label[c] == r;
    return m;
  }

  int count(Region r) const {
    int n = 0;
    for (Region x : label) n += x == r;
    return n;
  }

  bool operator==(const RegionMap&) const = default;
};

/// lambda = eps^2 (|grad T|^2/T + |grad u|_F^2 + sqrt((|lap u|^2 + |lap rho/rho|^2)(1+T^2))).
template <int Dim>
double indicator_lambda(const Moments<Dim>& m, const PrimitiveGradients<Dim>& d1, const std::array<double, Dim>& lap_u,
                        double lap_rho, double epsilon) {
  require_valid(m, "indicator");
  double gT = 0.0, gu = 0.0, lu = 0.0;
  for (int b = 0; b < Dim; ++b) {
    gT += d1.dT[b] * d1.dT[b];
    for (int a = 0; a < Dim; ++a) gu += d1.du[a][b] * d1.du[a][b];
  }
  for (int a = 0; a < Dim; ++a) lu += lap_u[a] * lap_u[a];
  const double lr = lap_rho / m.rho;
  return epsilon * epsilon * (gT / m.T + gu + std::sqrt((lu + lr * lr) * (1.0 + m.T * m.T)));
}

inline bool fluid_breakdown(double lambda, const DecompositionConfig& config) { return lambda > config.eta0; }

/// Cell-centre data feeding the indicator.
template <int Dim>
struct CellDerivatives {
  Moments<Dim> m;
  PrimitiveGradients<Dim> first;
  std::array<double, Dim> lap_u{};
  double lap_rho = 0.0;
};

namespace detail {

/// Centre-to-centre distance between neighbouring cells c and nb along d
/// (uses half widths, so periodic wrap needs no coordinate shift).
template <int Dim>
double center_gap(const Mesh<Dim>& mesh, int c, int nb, int d) {
  return 0.5 * (mesh.width(c, d) + mesh.width(nb, d));
}

/// Three-point (or one-sided two-point) derivative of cell values q along d.
template <int Dim>
double cell_difference(const std::vector<double>& q, const Mesh<Dim>& mesh, const FaceTopology<Dim>& topo, int c,
                       int d) {
  const int lo = topo.neighbor(c, d, 0), hi = topo.neighbor(c, d, 1);
  if (lo >= 0 && hi >= 0) {
    const double h1 = center_gap(mesh, c, lo, d), h2 = center_gap(mesh, c, hi, d);
    return (-h2 / (h1 * (h1 + h2))) * q[lo] + ((h2 - h1) / (h1 * h2)) * q[c] + (h1 / (h2 * (h1 + h2))) * q[hi];
  }
  if (hi >= 0) return (q[hi] - q[c]) / center_gap(mesh, c, hi, d);
  if (lo >= 0) return (q[c] - q[lo]) / center_gap(mesh, c, lo, d);
  return 0.0;
}

/// Central difference (g_{i+1} - g_{i-1}) / (x_{i+1} - x_{i-1}), one-sided at boundaries.
template <int Dim>
double central_difference(const std::vector<double>& g, const Mesh<Dim>& mesh, const FaceTopology<Dim>& topo, int c,
                          int d) {
  const int lo = topo.neighbor(c, d, 0), hi = topo.neighbor(c, d, 1);
  if (lo >= 0 && hi >= 0) return (g[hi] - g[lo]) / (center_gap(mesh, c, lo, d) + center_gap(mesh, c, hi, d));
  if (hi >= 0) return (g[hi] - g[c]) / center_gap(mesh, c, hi, d);
  if (lo >= 0) return (g[c] - g[lo]) / center_gap(mesh, c, lo, d);
  return 0.0;
}

}  // namespace detail

/// Conserved-variable gradients at cell centres: DG derivative along axes
/// with K >= 1, three-point differences of cell values along axes with K = 0.
template <int Dim>
std::vector<std::pair<Conserved<Dim>, ConservedGradient<Dim>>> cell_center_gradients(const MacroField<Dim>& U,
                                                                                     const DgSpace<Dim>& space,
                                                                                     const FaceTopology<Dim>& topo) {
  const int nc = space.cells();
  const std::array<double, Dim> center{};
  std::vector<std::pair<Conserved<Dim>, ConservedGradient<Dim>>> out(nc);
  std::array<std::vector<double>, kConserved<Dim>> cellval;
  for (int k = 0; k < kConserved<Dim>; ++k) {
    cellval[k].resize(nc);
    for (int c = 0; c < nc; ++c) {
      cellval[k][c] = space.evaluate(U[k].cell(c), center);
      out[c].first[k] = cellval[k][c];
    }
  }
  for (int d = 0; d < Dim; ++d)
    for (int k = 0; k < kConserved<Dim>; ++k)
      for (int c = 0; c < nc; ++c)
        out[c].second[d][k] = space.order(d) >= 1 ? space.derivative(U[k].cell(c), c, d, center)
                                                  : detail::cell_difference(cellval[k], space.mesh(), topo, c, d);
  return out;
}

/// Moments, first derivatives and Laplacians of u and rho at every cell centre.
template <int Dim>
std::vector<CellDerivatives<Dim>> cell_center_derivatives(const MacroField<Dim>& U, const DgSpace<Dim>& space,
                                                          const FaceTopology<Dim>& topo) {
  const int nc = space.cells();
  const auto cg = cell_center_gradients(U, space, topo);
  std::vector<CellDerivatives<Dim>> out(nc);
  for (int c = 0; c < nc; ++c) {
    out[c].m = Moments<Dim>::from_conserved(cg[c].first);
    require_valid(out[c].m, "cell centre");
    out[c].first = primitive_gradients<Dim>(cg[c].first, cg[c].second);
  }
  std::vector<double> g(nc);
  for (int d = 0; d < Dim; ++d) {
    for (int c = 0; c < nc; ++c) g[c] = out[c].first.drho[d];
    for (int c = 0; c < nc; ++c) out[c].lap_rho += detail::central_difference(g, space.mesh(), topo, c, d);
    for (int a = 0; a < Dim; ++a) {
      for (int c = 0; c < nc; ++c) g[c] = out[c].first.du[a][d];
      for (int c = 0; c < nc; ++c) out[c].lap_u[a] += detail::central_difference(g, space.mesh(), topo, c, d);
    }
  }
  return out;
}

/// Nodal gradients of U from the local DG polynomial (axes with K >= 1) or
/// the cell-centre difference (axes with K = 0).
template <int Dim>
void local_gradients(const MacroField<Dim>& U, GradientField<Dim>& S, const DgSpace<Dim>& space,
                     const FaceTopology<Dim>& topo, const std::vector<char>& mask = {}) {
  const int npc = space.nodes_per_cell();
  std::vector<std::pair<Conserved<Dim>, ConservedGradient<Dim>>> cg;
  for (int d = 0; d < Dim; ++d)
    if (space.order(d) == 0 && cg.empty()) cg = cell_center_gradients(U, space, topo);
  for (int d = 0; d < Dim; ++d) {
    const NodalBasis& b = space.basis(d);
    const int nl = b.size();
    for (int k = 0; k < kConserved<Dim>; ++k)
      for (int c = 0; c < space.cells(); ++c) {
        if (!mask.empty() && !mask[c]) continue;
        const double* u = U[k].cell(c);
        double* s = S[d][k].cell(c);
        if (nl == 1) {
          for (int n = 0; n < npc; ++n) s[n] = cg[c].second[d][k];
          continue;
        }
        const double inv = 1.0 / space.mesh().width(c, d);
        for (int t = 0; t < space.face_nodes(d); ++t)
          for (int kk = 0; kk < nl; ++kk) {
            double sum = 0.0;
            for (int l = 0; l < nl; ++l) sum += b.diff(kk, l) * u[space.line_node(d, l, t)];
            s[space.line_node(d, kk, t)] = inv * sum;
          }
      }
  }
}

/// sum_j w (|f1 - g1|^2 + |f2 - g2|^2) at one space point.
template <int Dim>
double pair_distance2(const ReducedPair& f, const ChapmanEnskogPair<Dim>& ce, const VelocityGrid<Dim>& grid) {
  double s = 0.0;
  for (int j = 0; j < grid.size(); ++j) {
    const auto [a, b] = ce(grid.velocity(j));
    const double d1 = f.first[j] - a, d2 = f.second[j] - b;
    s += d1 * d1 + d2 * d2;
  }
  return grid.weight() * s;
}

/// Discrete L2 distance over (cell nodes x velocity nodes) between stored
/// pairs and the truncated pairs of their own moments and gradients.
/// `weights` are the reference node weights of the cell.
template <int Dim>
double compression_distance(const std::vector<ReducedPair>& f, const std::vector<Moments<Dim>>& m,
                            const std::vector<PrimitiveGradients<Dim>>& g, const std::vector<double>& weights,
                            double epsilon, const VelocityGrid<Dim>& grid) {
  double s = 0.0;
  for (std::size_t n = 0; n < f.size(); ++n)
    s += weights[n] * pair_distance2(f[n], ChapmanEnskogPair<Dim>(m[n], g[n], epsilon), grid);
  return std::sqrt(s);
}

template <int Dim>
bool kinetic_compression(const std::vector<ReducedPair>& f, const std::vector<Moments<Dim>>& m,
                         const std::vector<PrimitiveGradients<Dim>>& g, const std::vector<double>& weights,
                         double epsilon, const VelocityGrid<Dim>& grid, const DecompositionConfig& config) {
  return compression_distance(f, m, g, weights, epsilon, grid) <= config.delta0;
}

/// Compression distance of cell c read directly from the distribution, with
/// moments U and local gradients S.
template <int Dim>
double cell_compression_distance(const ReducedDistribution<Dim>& f, int c, const MacroField<Dim>& U,
                                 const GradientField<Dim>& S, const DgSpace<Dim>& space,
                                 const VelocityGrid<Dim>& grid, double epsilon) {
  const int npc = space.nodes_per_cell();
  double total = 0.0;
  for (int n = 0; n < npc; ++n) {
    const int dof = c * npc + n;
    const Conserved<Dim> u = conserved_at(U, dof);
    ConservedGradient<Dim> s{};
    for (int d = 0; d < Dim; ++d) s[d] = conserved_at(S[d], dof);
    const Moments<Dim> m = Moments<Dim>::from_conserved(u);
    if (!m.valid()) return std::numeric_limits<double>::infinity();
    const ChapmanEnskogPair<Dim> ce(m, primitive_gradients<Dim>(u, s), epsilon);
    double acc = 0.0;
    for (int j = 0; j < grid.size(); ++j) {
      const auto [a, b] = ce(grid.velocity(j));
      const double d1 = f(0, j, dof) - a, d2 = f(1, j, dof) - b;
      acc += d1 * d1 + d2 * d2;
    }
    total += space.reference_weight(n) * grid.weight() * acc;
  }
  return std::sqrt(total);
}

/// New labels from per-cell criteria: breakdown[c] is read on Fluid cells,
/// compression[c] on non-forced Kinetic cells. Forced cells become Kinetic.
inline RegionMap update_regions(const RegionMap& map, const std::vector<char>& breakdown,
                                const std::vector<char>& compression, long step = 0) {
  RegionMap next = map;
  for (int c = 0; c < map.size(); ++c) {
    Region r = map.label[c];
    if (map.forced[c]) {
      r = Region::Kinetic;
    } else if (r == Region::Fluid && breakdown[c]) {
      r = Region::Kinetic;
    } else if (r == Region::Kinetic && compression[c]) {
      r = Region::Fluid;
    }
    if (r != map.label[c]) {
      next.label[c] = r;
      next.last_change[c] = step;
    }
  }
  return next;
}

}  // namespace hykin
