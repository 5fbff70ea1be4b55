#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "hykin/dg_space.hpp"
#include "hykin/velocity_grid.hpp"

namespace hykin {

/// Spatial derivatives of the primitive variables at one point.
/// du[a][b] is d u_a / d x_b.
template <int Dim>
struct PrimitiveGradients {
  std::array<double, Dim> drho{};
  std::array<std::array<double, Dim>, Dim> du{};
  std::array<double, Dim> dT{};
};

/// Gradient of the conserved variables, S[d] = d U / d x_d.
template <int Dim>
using ConservedGradient = std::array<Conserved<Dim>, Dim>;

/// Chain rule from (U, grad U) to the primitive gradients (rho, u, T).
template <int Dim>
PrimitiveGradients<Dim> primitive_gradients(const Conserved<Dim>& U, const ConservedGradient<Dim>& S) {
  const Moments<Dim> m = Moments<Dim>::from_conserved(U);
  PrimitiveGradients<Dim> g;
  for (int b = 0; b < Dim; ++b) {
    const double drho = S[b][0];
    g.drho[b] = drho;
    double u_du = 0.0;
    for (int a = 0; a < Dim; ++a) {
      g.du[a][b] = (S[b][1 + a] - m.u[a] * drho) / m.rho;
      u_du += m.u[a] * g.du[a][b];
    }
    g.dT[b] = (S[b][Dim + 1] - 0.5 * m.speed2() * drho - m.rho * u_du - 1.5 * m.T * drho) / (1.5 * m.rho);
  }
  return g;
}

/// Polynomial in the peculiar velocity V = (v - u)/sqrt(T), degree <= 3
/// per variable. Coefficient (m, q) multiplies V_0^m V_1^q.
template <int Dim>
struct VPoly {
  static constexpr int kTerms = Dim == 1 ? 4 : 16;
  std::array<double, kTerms> c{};

  double& at(int m, int q = 0) { return c[m + 4 * q]; }
  double at(int m, int q = 0) const { return c[m + 4 * q]; }

  double operator()(const std::array<double, Dim>& V) const {
    if constexpr (Dim == 1) {
      return c[0] + V[0] * (c[1] + V[0] * (c[2] + V[0] * c[3]));
    } else {
      double s = 0.0, pq = 1.0;
      for (int q = 0; q < 4; ++q) {
        const double* r = &c[4 * q];
        s += pq * (r[0] + V[0] * (r[1] + V[0] * (r[2] + V[0] * r[3])));
        pq *= V[1];
      }
      return s;
    }
  }
};

/// First-order Chapman-Enskog truncation of the Chu-reduced pair, stored as
/// Maxwellian times a polynomial in V for each component:
/// first(v) = M1(v) p1(V), second(v) = M1(v) p2(V).
template <int Dim>
class ChapmanEnskogPair {
 public:
  ChapmanEnskogPair() = default;

  /// Equilibrium (reduced Maxwellian) pair.
  explicit ChapmanEnskogPair(const Moments<Dim>& m) : ChapmanEnskogPair(m, PrimitiveGradients<Dim>{}, 0.0) {}

  ChapmanEnskogPair(const Moments<Dim>& m, const PrimitiveGradients<Dim>& g, double epsilon) : m_(m) {
    require_valid(m, "Chapman-Enskog pair");
    sqrtT_ = std::sqrt(m.T);
    norm_ = m.rho / std::pow(2.0 * std::numbers::pi * m.T, 0.5 * Dim);
    const double r = epsilon == 0.0 ? 0.0 : epsilon / collision_frequency(m);
    if constexpr (Dim == 1) {
      const double a = -r * (2.0 / 3.0) * g.du[0][0];
      const double b = -r * 0.5 * g.dT[0] / sqrtT_;
      // p1 = 1 + a(V^2-1) + b V (V^2-3)
      p1_.at(0) = 1.0 - a;
      p1_.at(1) = -3.0 * b;
      p1_.at(2) = a;
      p1_.at(3) = b;
      // p2 = T [1 + a(V^2-2) + b(V^3-V)]
      p2_.at(0) = m.T * (1.0 - 2.0 * a);
      p2_.at(1) = -m.T * b;
      p2_.at(2) = m.T * a;
      p2_.at(3) = m.T * b;
    } else {
      const double A = g.du[0][0], B = g.du[1][1], C = g.du[1][0] + g.du[0][1];
      const double t1 = g.dT[0] / sqrtT_, t2 = g.dT[1] / sqrtT_;
      p1_.at(0, 0) = 1.0 + r * (A + B) / 3.0;
      p1_.at(2, 0) = -r * (2.0 * A - B) / 3.0;
      p1_.at(0, 2) = -r * (2.0 * B - A) / 3.0;
      p1_.at(1, 1) = -r * C;
      p1_.at(3, 0) = -0.5 * r * t1;
      p1_.at(1, 2) = -0.5 * r * t1;
      p1_.at(1, 0) = 2.0 * r * t1;
      p1_.at(2, 1) = -0.5 * r * t2;
      p1_.at(0, 3) = -0.5 * r * t2;
      p1_.at(0, 1) = 2.0 * r * t2;
      for (int k = 0; k < VPoly<Dim>::kTerms; ++k) p2_.c[k] = 0.5 * m.T * p1_.c[k];
      p2_.at(0, 0) += r * m.T * (A + B) / 3.0;
      p2_.at(1, 0) -= 0.5 * r * m.T * t1;
      p2_.at(0, 1) -= 0.5 * r * m.T * t2;
    }
  }

  const Moments<Dim>& moments() const { return m_; }
  const VPoly<Dim>& first_poly() const { return p1_; }
  const VPoly<Dim>& second_poly() const { return p2_; }
  double sqrt_temperature() const { return sqrtT_; }

  std::array<double, Dim> peculiar(const std::array<double, Dim>& v) const {
    std::array<double, Dim> V{};
    for (int d = 0; d < Dim; ++d) V[d] = (v[d] - m_.u[d]) / sqrtT_;
    return V;
  }

  /// Maxwellian factor M1(v).
  double maxwellian(const std::array<double, Dim>& v) const {
    const auto V = peculiar(v);
    double s = 0.0;
    for (int d = 0; d < Dim; ++d) s += V[d] * V[d];
    return norm_ * std::exp(-0.5 * s);
  }

  std::pair<double, double> operator()(const std::array<double, Dim>& v) const {
    const auto V = peculiar(v);
    double s = 0.0;
    for (int d = 0; d < Dim; ++d) s += V[d] * V[d];
    const double M = norm_ * std::exp(-0.5 * s);
    return {M * p1_(V), M * p2_(V)};
  }

 private:
  Moments<Dim> m_;
  double sqrtT_ = 1.0;
  double norm_ = 0.0;
  VPoly<Dim> p1_, p2_;
};

/// Values of the two reduced components at every node of a velocity grid.
struct ReducedPair {
  std::vector<double> first;
  std::vector<double> second;
};

template <int Dim>
ReducedPair sample(const ChapmanEnskogPair<Dim>& pair, const VelocityGrid<Dim>& grid) {
  ReducedPair out{std::vector<double>(grid.size()), std::vector<double>(grid.size())};
  for (int j = 0; j < grid.size(); ++j) {
    const auto [a, b] = pair(grid.velocity(j));
    out.first[j] = a;
    out.second[j] = b;
  }
  return out;
}

/// Conserved moments (rho, rho u, E) of a reduced pair by the mid-point rule,
/// E = sum w (|v|^2/2 first + second).
template <int Dim>
Conserved<Dim> conserved_moments(const ReducedPair& f, const VelocityGrid<Dim>& grid) {
  Conserved<Dim> U{};
  for (int j = 0; j < grid.size(); ++j) {
    const double a = f.first[j];
    U[0] += a;
    for (int d = 0; d < Dim; ++d) U[1 + d] += grid.component(j, d) * a;
    U[Dim + 1] += 0.5 * grid.speed2(j) * a + f.second[j];
  }
  for (double& x : U) x *= grid.weight();
  return U;
}

template <int Dim>
Moments<Dim> moments_from_pair(const ReducedPair& f, const VelocityGrid<Dim>& grid) {
  const Conserved<Dim> U = conserved_moments(f, grid);
  if (!(U[0] > 0.0)) throw InvalidState("reduced moments: nonpositive discrete density");
  const Moments<Dim> m = Moments<Dim>::from_conserved(U);
  if (!(m.T > 0.0)) throw InvalidState("reduced moments: nonpositive temperature");
  return m;
}

inline Moments<1> moments_from_h(const ReducedPair& h, const VelocityGrid<1>& grid) { return moments_from_pair(h, grid); }
inline Moments<2> moments_from_g(const ReducedPair& g, const VelocityGrid<2>& grid) { return moments_from_pair(g, grid); }

inline ReducedPair reduced_maxwellian_h(const Moments<1>& m, const VelocityGrid<1>& grid) {
  return sample(ChapmanEnskogPair<1>(m), grid);
}
inline ReducedPair reduced_maxwellian_g(const Moments<2>& m, const VelocityGrid<2>& grid) {
  return sample(ChapmanEnskogPair<2>(m), grid);
}

inline ReducedPair chapman_enskog_h(const Moments<1>& m, const PrimitiveGradients<1>& g, double epsilon,
                                    const VelocityGrid<1>& grid) {
  return sample(ChapmanEnskogPair<1>(m, g, epsilon), grid);
}
inline ReducedPair chapman_enskog_g(const Moments<2>& m, const PrimitiveGradients<2>& g, double epsilon,
                                    const VelocityGrid<2>& grid) {
  return sample(ChapmanEnskogPair<2>(m, g, epsilon), grid);
}

/// Conserved variables as one Field per component (structure of arrays).
template <int Dim>
struct MacroField : std::array<Field, kConserved<Dim>> {};

template <int Dim>
MacroField<Dim> make_macro_field(const DgSpace<Dim>& space) {
  MacroField<Dim> U;
  for (auto& f : U) f = Field(space);
  return U;
}

/// One MacroField per spatial direction: S[d] = dU/dx_d.
template <int Dim>
struct GradientField : std::array<MacroField<Dim>, Dim> {};

template <int Dim>
GradientField<Dim> make_gradient_field(const DgSpace<Dim>& space) {
  GradientField<Dim> S;
  for (auto& s : S) s = make_macro_field(space);
  return S;
}

template <int Dim>
Conserved<Dim> conserved_at(const MacroField<Dim>& U, std::size_t dof) {
  Conserved<Dim> u{};
  for (int k = 0; k < kConserved<Dim>; ++k) u[k] = U[k][dof];
  return u;
}

template <int Dim>
void store(MacroField<Dim>& U, std::size_t dof, const Conserved<Dim>& u) {
  for (int k = 0; k < kConserved<Dim>; ++k) U[k][dof] = u[k];
}

/// Chu-reduced distribution over (velocity node, cell, cell node). Each
/// component is stored velocity-major so one velocity slab is contiguous.
template <int Dim>
class ReducedDistribution {
 public:
  ReducedDistribution() = default;
  ReducedDistribution(int dofs, int velocities)
      : dofs_(dofs), velocities_(velocities) {
    for (auto& c : comp_) c.assign(static_cast<std::size_t>(dofs) * velocities, 0.0);
  }

  int dofs() const { return dofs_; }
  int velocities() const { return velocities_; }

  double* slab(int component, int j) { return comp_[component].data() + static_cast<std::size_t>(j) * dofs_; }
  const double* slab(int component, int j) const {
    return comp_[component].data() + static_cast<std::size_t>(j) * dofs_;
  }

  double& operator()(int component, int j, int dof) { return comp_[component][static_cast<std::size_t>(j) * dofs_ + dof]; }
  double operator()(int component, int j, int dof) const {
    return comp_[component][static_cast<std::size_t>(j) * dofs_ + dof];
  }

  ReducedPair at(int dof) const {
    ReducedPair p{std::vector<double>(velocities_), std::vector<double>(velocities_)};
    for (int j = 0; j < velocities_; ++j) {
      p.first[j] = (*this)(0, j, dof);
      p.second[j] = (*this)(1, j, dof);
    }
    return p;
  }

  void assign(int dof, const ReducedPair& p) {
    for (int j = 0; j < velocities_; ++j) {
      (*this)(0, j, dof) = p.first[j];
      (*this)(1, j, dof) = p.second[j];
    }
  }

  void assign(int dof, const ChapmanEnskogPair<Dim>& pair, const VelocityGrid<Dim>& grid) {
    for (int j = 0; j < velocities_; ++j) {
      const auto [a, b] = pair(grid.velocity(j));
      (*this)(0, j, dof) = a;
      (*this)(1, j, dof) = b;
    }
  }

  const std::vector<double>& component(int i) const { return comp_[i]; }
  std::vector<double>& component(int i) { return comp_[i]; }

  bool operator==(const ReducedDistribution&) const = default;

 private:
  int dofs_ = 0;
  int velocities_ = 0;
  std::array<std::vector<double>, 2> comp_;
};

/// Discrete conserved moments at every dof of cells selected by `mask`
/// (empty mask = all cells). Sums run over velocity in a fixed order.
template <int Dim>
void accumulate_moments(const ReducedDistribution<Dim>& f, const VelocityGrid<Dim>& grid,
                        const DgSpace<Dim>& space, MacroField<Dim>& U, const std::vector<char>& mask = {}) {
  const int npc = space.nodes_per_cell();
  const int ndof = space.dofs();
  std::vector<Conserved<Dim>> acc(ndof);
  for (int j = 0; j < grid.size(); ++j) {
    const double* a = f.slab(0, j);
    const double* b = f.slab(1, j);
    std::array<double, Dim> v = grid.velocity(j);
    const double e = 0.5 * grid.speed2(j);
    for (int c = 0; c < space.cells(); ++c) {
      if (!mask.empty() && !mask[c]) continue;
      for (int n = c * npc; n < (c + 1) * npc; ++n) {
        auto& s = acc[n];
        s[0] += a[n];
        for (int d = 0; d < Dim; ++d) s[1 + d] += v[d] * a[n];
        s[Dim + 1] += e * a[n] + b[n];
      }
    }
  }
  const double w = grid.weight();
  for (int c = 0; c < space.cells(); ++c) {
    if (!mask.empty() && !mask[c]) continue;
    for (int n = c * npc; n < (c + 1) * npc; ++n)
      for (int k = 0; k < kConserved<Dim>; ++k) U[k][n] = w * acc[n][k];
  }
}

}  // namespace hykin
