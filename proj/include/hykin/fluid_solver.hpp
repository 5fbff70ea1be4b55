#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "hykin/boundary.hpp"
#include "hykin/dg_space.hpp"
#include "hykin/errors.hpp"
#include "hykin/kfvs.hpp"
#include "hykin/reduced.hpp"

namespace hykin {

/// Conserved variables, their reconstructed gradients, and the clock.
template <int Dim>
struct FluidState {
  MacroField<Dim> U;
  GradientField<Dim> S;
  double t = 0.0;
  double epsilon = 1e-2;
  double dt = 0.0;
  long step = 0;
};

/// Per-face, per-face-node numerical flux storage.
template <int Dim>
class FaceFluxTable {
 public:
  FaceFluxTable() = default;
  FaceFluxTable(int faces, int nodes) : nodes_(nodes), data_(static_cast<std::size_t>(faces) * nodes) {}

  Conserved<Dim>& operator()(int face, int t) { return data_[static_cast<std::size_t>(face) * nodes_ + t]; }
  const Conserved<Dim>& operator()(int face, int t) const { return data_[static_cast<std::size_t>(face) * nodes_ + t]; }

 private:
  int nodes_ = 1;
  std::vector<Conserved<Dim>> data_;
};

template <int Dim>
int max_face_nodes(const DgSpace<Dim>& space) {
  int n = 1;
  for (int d = 0; d < Dim; ++d) n = std::max(n, space.face_nodes(d));
  return n;
}

/// Bassi-Rebay gradients with central interface values; boundary faces use
/// the interior trace. Cells outside `mask` (if given) are skipped.
template <int Dim>
void gradient_reconstruct(const MacroField<Dim>& U, GradientField<Dim>& S, const DgSpace<Dim>& space,
                          const FaceTopology<Dim>& topo, const std::vector<char>& mask = {}) {
  const int npc = space.nodes_per_cell();
  for (int d = 0; d < Dim; ++d) {
    const NodalBasis& b = space.basis(d);
    const int nl = b.size();
    const int nt = space.face_nodes(d);
    const auto& G = b.stiffness();
    const auto& lr = b.lift_right();
    const auto& ll = b.lift_left();
    for (int k = 0; k < kConserved<Dim>; ++k) {
      const double* u = U[k].data();
      double* s = S[d][k].data();
      for (int c = 0; c < space.cells(); ++c) {
        if (!mask.empty() && !mask[c]) continue;
        const double inv = 1.0 / space.mesh().width(c, d);
        const double* uc = u + c * npc;
        double* sc = s + c * npc;
        const int lo = topo.neighbor(c, d, 0), hi = topo.neighbor(c, d, 1);
        for (int t = 0; t < nt; ++t) {
          const double own_l = space.trace(uc, d, 0, t), own_r = space.trace(uc, d, 1, t);
          const double hatL = lo >= 0 ? 0.5 * (space.trace(u + lo * npc, d, 1, t) + own_l) : own_l;
          const double hatR = hi >= 0 ? 0.5 * (own_r + space.trace(u + hi * npc, d, 0, t)) : own_r;
          for (int kk = 0; kk < nl; ++kk) {
            double vol = 0.0;
            for (int l = 0; l < nl; ++l) vol += G[kk * nl + l] * uc[space.line_node(d, l, t)];
            sc[space.line_node(d, kk, t)] = inv * (-vol + lr[kk] * hatR - ll[kk] * hatL);
          }
        }
      }
    }
  }
}

/// Moments and primitive gradients of the fluid traces at one face node.
template <int Dim>
struct FaceState {
  Moments<Dim> m;
  PrimitiveGradients<Dim> g;
};

template <int Dim>
FaceState<Dim> face_state(const MacroField<Dim>& U, const GradientField<Dim>& S, const DgSpace<Dim>& space, int c,
                          int d, int side, int t) {
  const int npc = space.nodes_per_cell();
  Conserved<Dim> u{};
  ConservedGradient<Dim> s{};
  for (int k = 0; k < kConserved<Dim>; ++k) {
    u[k] = space.trace(U[k].data() + c * npc, d, side, t);
    for (int e = 0; e < Dim; ++e) s[e][k] = space.trace(S[e][k].data() + c * npc, d, side, t);
  }
  FaceState<Dim> fs{Moments<Dim>::from_conserved(u), {}};
  if (!fs.m.valid())
    throw TimeStepFailure("fluid trace in cell " + std::to_string(c) + " has rho=" + std::to_string(fs.m.rho) +
                              ", T=" + std::to_string(fs.m.T),
                          -1, c);
  fs.g = primitive_gradients<Dim>(u, s);
  return fs;
}

/// Closed-form boundary flux of a fluid cell at a wall or outflow boundary.
/// `interior` is the truncated pair of the interior trace.
template <int Dim>
Conserved<Dim> fluid_boundary_flux(const BoundaryKind& kind, int d, int side,
                                   const ChapmanEnskogPair<Dim>& interior, double tangential) {
  const HalfLine out = side == 1 ? HalfLine::Upper : HalfLine::Lower;
  const HalfLine in = side == 1 ? HalfLine::Lower : HalfLine::Upper;
  if (std::holds_alternative<Outflow>(kind)) return kfvs_flux(interior, interior, d);
  const Conserved<Dim> Fout = half_flux(interior, d, out);
  Conserved<Dim> Fin{};
  if (const auto* w = std::get_if<EvaporatingWall>(&kind)) {
    Moments<Dim> m;
    m.rho = w->p / w->T;
    m.T = w->T;
    Fin = half_flux(ChapmanEnskogPair<Dim>(m), d, in);
  } else if (const auto* w = std::get_if<DiffuseMovingWall>(&kind)) {
    Moments<Dim> m;
    m.rho = 1.0;
    m.T = w->T(tangential);
    for (int a = 0; a < Dim; ++a) m.u[a] = w->u[a];
    Fin = half_flux(ChapmanEnskogPair<Dim>(m), d, in);
    const double sigma = -Fout[0] / Fin[0];
    for (double& x : Fin) x *= sigma;
  } else {
    throw ConfigurationError("periodic faces are interior faces");
  }
  Conserved<Dim> F{};
  for (int k = 0; k < kConserved<Dim>; ++k) F[k] = Fout[k] + Fin[k];
  return F;
}

/// Closed-form flux at face node t of a face whose non-boundary sides are fluid.
template <int Dim>
Conserved<Dim> fluid_face_flux(const Face& face, int t, const MacroField<Dim>& U, const GradientField<Dim>& S,
                               const DgSpace<Dim>& space, const BoundarySpec<Dim>& bc, double epsilon) {
  const int d = face.axis;
  if (face.boundary()) {
    const int c = face.interior();
    const FaceState<Dim> fs = face_state(U, S, space, c, d, face.side, t);
    return fluid_boundary_flux(bc.side[d][face.side], d, face.side, ChapmanEnskogPair<Dim>(fs.m, fs.g, epsilon),
                               tangential_coordinate(space, c, d, face.side, t));
  }
  const FaceState<Dim> L = face_state(U, S, space, face.minus, d, 1, t);
  const FaceState<Dim> R = face_state(U, S, space, face.plus, d, 0, t);
  return kfvs_flux(ChapmanEnskogPair<Dim>(L.m, L.g, epsilon), ChapmanEnskogPair<Dim>(R.m, R.g, epsilon), d);
}

/// Explicit DG update of the conserved variables on `mask` cells (empty = all)
/// with nodal volume flux F(U, S) and face fluxes from `flux`.
template <int Dim>
void fluid_update(const MacroField<Dim>& U, const GradientField<Dim>& S, MacroField<Dim>& Unew,
                  const FaceFluxTable<Dim>& flux, const DgSpace<Dim>& space, const FaceTopology<Dim>& topo,
                  double epsilon, double dt, const std::vector<char>& mask = {}, long step = -1) {
  const int npc = space.nodes_per_cell();
  std::vector<std::array<Conserved<Dim>, Dim>> F(npc);
  for (int c = 0; c < space.cells(); ++c) {
    if (!mask.empty() && !mask[c]) continue;
    for (int n = 0; n < npc; ++n) {
      const int dof = c * npc + n;
      const Conserved<Dim> u = conserved_at(U, dof);
      ConservedGradient<Dim> s{};
      for (int e = 0; e < Dim; ++e) s[e] = conserved_at(S[e], dof);
      const Moments<Dim> m = Moments<Dim>::from_conserved(u);
      if (!m.valid()) throw TimeStepFailure("fluid: invalid state in cell " + std::to_string(c), step, c);
      const PrimitiveGradients<Dim> g = primitive_gradients<Dim>(u, s);
      for (int d = 0; d < Dim; ++d) F[n][d] = navier_stokes_flux(m, g, epsilon, d);
      for (int k = 0; k < kConserved<Dim>; ++k) Unew[k][dof] = u[k];
    }
    for (int d = 0; d < Dim; ++d) {
      const NodalBasis& b = space.basis(d);
      const int nl = b.size();
      const auto& G = b.stiffness();
      const auto& lr = b.lift_right();
      const auto& ll = b.lift_left();
      const double coef = dt / space.mesh().width(c, d);
      const int fl = topo.face_of(c, d, 0), fr = topo.face_of(c, d, 1);
      for (int t = 0; t < space.face_nodes(d); ++t) {
        const Conserved<Dim>& FL = flux(fl, t);
        const Conserved<Dim>& FR = flux(fr, t);
        for (int kk = 0; kk < nl; ++kk) {
          const int node = space.line_node(d, kk, t);
          const int dof = c * npc + node;
          for (int k = 0; k < kConserved<Dim>; ++k) {
            double vol = 0.0;
            for (int l = 0; l < nl; ++l) vol += G[kk * nl + l] * F[space.line_node(d, l, t)][d][k];
            Unew[k][dof] += coef * (vol - lr[kk] * FR[k] + ll[kk] * FL[k]);
          }
        }
      }
    }
    for (int n = 0; n < npc; ++n) {
      const Moments<Dim> m = Moments<Dim>::from_conserved(conserved_at(Unew, c * npc + n));
      if (!m.valid())
        throw TimeStepFailure("fluid step produced rho=" + std::to_string(m.rho) + ", T=" + std::to_string(m.T) +
                                  " in cell " + std::to_string(c),
                              step, c);
    }
  }
}

/// Advective and diffusive step limit over `mask` cells (empty = all).
template <int Dim>
double fluid_cfl_limit(const MacroField<Dim>& U, const DgSpace<Dim>& space, double epsilon,
                       const std::vector<char>& mask = {}, double safety = 0.9) {
  const int npc = space.nodes_per_cell();
  double Tmax = 0.0;
  bool any = false;
  for (int c = 0; c < space.cells(); ++c) {
    if (!mask.empty() && !mask[c]) continue;
    for (int n = c * npc; n < (c + 1) * npc; ++n) Tmax = std::max(Tmax, Moments<Dim>::from_conserved(conserved_at(U, n)).T);
    any = true;
  }
  if (!any) return std::numeric_limits<double>::infinity();
  const double mu_max = 0.5 * std::sqrt(std::numbers::pi) * Tmax;
  double limit = std::numeric_limits<double>::infinity();
  for (int c = 0; c < space.cells(); ++c) {
    if (!mask.empty() && !mask[c]) continue;
    std::array<double, Dim> umax{};
    for (int n = c * npc; n < (c + 1) * npc; ++n) {
      const Moments<Dim> m = Moments<Dim>::from_conserved(conserved_at(U, n));
      const double cs = std::sqrt(5.0 * std::max(m.T, 0.0) / 3.0);
      for (int d = 0; d < Dim; ++d) umax[d] = std::max(umax[d], std::abs(m.u[d]) + cs);
    }
    double adv = 0.0, diff = 0.0;
    for (int d = 0; d < Dim; ++d) {
      const double h = space.mesh().width(c, d);
      const double p = 2.0 * space.order(d) + 1.0;
      adv += umax[d] * p / h;
      diff += 2.0 * epsilon * mu_max * p * p / (h * h);
    }
    const double a = adv > 0.0 ? 1.0 / adv : std::numeric_limits<double>::infinity();
    const double b = diff > 0.0 ? 1.0 / diff : std::numeric_limits<double>::infinity();
    limit = std::min(limit, safety * std::min(a, b));
  }
  return limit;
}

template <int Dim>
void check_fluid_cfl(const MacroField<Dim>& U, const DgSpace<Dim>& space, double epsilon, double dt,
                     const std::vector<char>& mask = {}) {
  const double limit = fluid_cfl_limit(U, space, epsilon, mask);
  if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12))
    throw ConfigurationError("fluid CFL violated: dt=" + std::to_string(dt) + " > " + std::to_string(limit));
}

template <int Dim, class Init>
FluidState<Dim> make_fluid_state(const DgSpace<Dim>& space, const Init& init, double epsilon, double dt) {
  FluidState<Dim> s;
  s.U = make_macro_field(space);
  s.S = make_gradient_field(space);
  s.epsilon = epsilon;
  s.dt = dt;
  for (int c = 0; c < space.cells(); ++c)
    for (int n = 0; n < space.nodes_per_cell(); ++n) {
      const Moments<Dim> m = init(space.node_position(c, n));
      require_valid(m, "initial data");
      store(s.U, space.dof(c, n), m.conserved());
    }
  return s;
}

/// Standalone Navier-Stokes DG solver on the whole mesh.
template <int Dim>
class FluidSolver {
 public:
  FluidSolver(DgSpace<Dim> space, BoundarySpec<Dim> bc)
      : space_(std::move(space)), bc_(std::move(bc)), topo_(space_.mesh(), bc_) {}

  const DgSpace<Dim>& space() const { return space_; }
  const FaceTopology<Dim>& topology() const { return topo_; }

  /// Forward Euler step; S is refreshed from U before the update.
  void step(FluidState<Dim>& s) {
    check_fluid_cfl(s.U, space_, s.epsilon, s.dt);
    try {
      advance(s);
    } catch (const TimeStepFailure& e) {
      if (e.step() >= 0) throw;
      throw TimeStepFailure(e.what(), s.step, e.cell());
    }
  }

 private:
  void advance(FluidState<Dim>& s) {
    gradient_reconstruct(s.U, s.S, space_, topo_);
    FaceFluxTable<Dim> flux(topo_.size(), max_face_nodes(space_));
    for (int id = 0; id < topo_.size(); ++id)
      for (int t = 0; t < space_.face_nodes(topo_[id].axis); ++t)
        flux(id, t) = fluid_face_flux(topo_[id], t, s.U, s.S, space_, bc_, s.epsilon);
    MacroField<Dim> Unew = make_macro_field(space_);
    fluid_update(s.U, s.S, Unew, flux, space_, topo_, s.epsilon, s.dt, {}, s.step);
    s.U = std::move(Unew);
    s.t += s.dt;
    ++s.step;
  }

  DgSpace<Dim> space_;
  BoundarySpec<Dim> bc_;
  FaceTopology<Dim> topo_;
};

/// Functional form of one forward-Euler Navier-Stokes step.
template <int Dim>
FluidState<Dim> ns_step(FluidState<Dim> s, const DgSpace<Dim>& space, const BoundarySpec<Dim>& bc) {
  FluidSolver<Dim>(space, bc).step(s);
  return s;
}

}  // namespace hykin
