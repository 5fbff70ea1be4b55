#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "hykin/boundary.hpp"
#include "hykin/decomposition.hpp"
#include "hykin/dg_space.hpp"
#include "hykin/fluid_solver.hpp"
#include "hykin/kinetic_solver.hpp"
#include "hykin/reduced.hpp"

namespace hykin {

enum class Mode { Hybrid, FullKinetic, FullFluid };

inline const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Hybrid:
      return "hybrid";
    case Mode::FullKinetic:
      return "full_kinetic";
    case Mode::FullFluid:
      return "full_fluid";
  }
  return "?";
}

struct HybridConfig {
  double epsilon = 1e-2;
  double dt = 0.0;
  Mode mode = Mode::Hybrid;
  DecompositionConfig decomposition;
  KineticOptions kinetic;
};

/// Region map plus the live unknowns: the distribution on kinetic cells and
/// the conserved variables everywhere (moments of f on kinetic cells).
template <int Dim>
struct HybridState {
  RegionMap regions;
  ReducedDistribution<Dim> f;
  MacroField<Dim> U;
  GradientField<Dim> S;
  double t = 0.0;
  long step = 0;
  int switches = 0;
};

/// Conserved totals and region statistics.
template <int Dim>
struct Diagnostics {
  double t = 0.0;
  long step = 0;
  Conserved<Dim> total{};
  int kinetic_cells = 0;
  double kinetic_fraction = 0.0;
  double kinetic_volume_fraction = 0.0;
};

template <int Dim>
Conserved<Dim> total_conserved(const MacroField<Dim>& U, const DgSpace<Dim>& space) {
  Conserved<Dim> tot{};
  for (int c = 0; c < space.cells(); ++c)
    for (int n = 0; n < space.nodes_per_cell(); ++n) {
      const double w = space.node_weight(c, n);
      for (int k = 0; k < kConserved<Dim>; ++k) tot[k] += w * U[k](c, n);
    }
  return tot;
}

/// Velocity moment w sum_j Phi(v_j) F_j of per-velocity fluxes F_j = (first, second).
template <int Dim>
Conserved<Dim> flux_moment(const std::vector<double>& first, const std::vector<double>& second,
                           const VelocityGrid<Dim>& grid) {
  Conserved<Dim> F{};
  for (int j = 0; j < grid.size(); ++j) {
    const double a = first[j];
    F[0] += a;
    for (int e = 0; e < Dim; ++e) F[1 + e] += grid.component(j, e) * a;
    F[Dim + 1] += 0.5 * grid.speed2(j) * a + second[j];
  }
  for (double& x : F) x *= grid.weight();
  return F;
}

/// Per-velocity upwind fluxes across a face between a kinetic trace and the
/// truncated pair reconstructed from a fluid trace, plus the fluid flux as
/// their velocity moment. `kinetic_on_minus` tells which side is kinetic.
template <int Dim>
struct MixedInterfaceFlux {
  ReducedPair kinetic;
  Conserved<Dim> fluid;
};

template <int Dim>
MixedInterfaceFlux<Dim> interface_flux(const ReducedPair& kinetic_trace, const ChapmanEnskogPair<Dim>& fluid_pair,
                                       bool kinetic_on_minus, int d, const VelocityGrid<Dim>& grid) {
  const int nv = grid.size();
  MixedInterfaceFlux<Dim> out{{std::vector<double>(nv), std::vector<double>(nv)}, {}};
  for (int j = 0; j < nv; ++j) {
    const double v = grid.component(j, d);
    const auto [g1, g2] = fluid_pair(grid.velocity(j));
    if (kinetic_on_minus) {
      out.kinetic.first[j] = upwind_flux(v, kinetic_trace.first[j], g1);
      out.kinetic.second[j] = upwind_flux(v, kinetic_trace.second[j], g2);
    } else {
      out.kinetic.first[j] = upwind_flux(v, g1, kinetic_trace.first[j]);
      out.kinetic.second[j] = upwind_flux(v, g2, kinetic_trace.second[j]);
    }
  }
  out.fluid = flux_moment(out.kinetic.first, out.kinetic.second, grid);
  return out;
}

/// Driver of the coupled kinetic/fluid step.
template <int Dim>
class HybridSolver {
 public:
  HybridSolver(DgSpace<Dim> space, VelocityGrid<Dim> grid, BoundarySpec<Dim> bc, HybridConfig config)
      : space_(std::move(space)), grid_(std::move(grid)), bc_(std::move(bc)), topo_(space_.mesh(), bc_),
        config_(config) {
    config_.decomposition.validate();
    if (!(config_.epsilon >= 0.0)) throw ConfigurationError("epsilon must be non-negative");
  }

  const DgSpace<Dim>& space() const { return space_; }
  const VelocityGrid<Dim>& grid() const { return grid_; }
  const BoundarySpec<Dim>& boundary() const { return bc_; }
  const FaceTopology<Dim>& topology() const { return topo_; }
  const HybridConfig& config() const { return config_; }
  void set_dt(double dt) { config_.dt = dt; }

  /// Initial state from pointwise macroscopic data. Non-fluid modes start
  /// all-kinetic; forced bands apply to non-fluid modes only.
  template <class Init>
  HybridState<Dim> initialize(const Init& init) const {
    HybridState<Dim> s;
    const int nc = space_.cells();
    const Region start = config_.mode == Mode::FullFluid ? Region::Fluid : Region::Kinetic;
    s.regions = RegionMap(nc, start);
    if (config_.mode == Mode::Hybrid) s.regions.forced = wall_band_cells(space_.mesh(), bc_, config_.decomposition.forced_band);
    s.f = ReducedDistribution<Dim>(start == Region::Kinetic ? space_.dofs() : 0, grid_.size());
    s.U = make_macro_field(space_);
    s.S = make_gradient_field(space_);
    for (int c = 0; c < nc; ++c)
      for (int n = 0; n < space_.nodes_per_cell(); ++n) {
        const Moments<Dim> m = init(space_.node_position(c, n));
        require_valid(m, "initial data");
        const int dof = space_.dof(c, n);
        if (start == Region::Kinetic) {
          s.f.assign(dof, ChapmanEnskogPair<Dim>(m), grid_);
        } else {
          store(s.U, dof, m.conserved());
        }
      }
    if (start == Region::Kinetic) accumulate_moments(s.f, grid_, space_, s.U);
    return s;
  }

  /// Default step: kinetic CFL limit, reduced by the fluid limit over
  /// non-forced cells unless the run is purely kinetic.
  double default_dt(const HybridState<Dim>& s) const {
    double dt = kinetic_cfl_limit(space_, grid_);
    if (config_.mode != Mode::FullKinetic) {
      std::vector<char> free(space_.cells());
      for (int c = 0; c < space_.cells(); ++c) free[c] = !s.regions.forced[c];
      dt = std::min(dt, fluid_cfl_limit(s.U, space_, config_.epsilon, free));
    }
    return dt;
  }

  /// Refuse to step if either sub-solver's stability limit is violated.
  void check_cfl(const HybridState<Dim>& s) const {
    const int nk = s.regions.count(Region::Kinetic);
    if (nk > 0) check_kinetic_cfl(space_, grid_, config_.dt);
    if (nk < space_.cells()) check_fluid_cfl(s.U, space_, config_.epsilon, config_.dt, s.regions.mask(Region::Fluid));
  }

  /// One coupled step. Failures carry the step index.
  void step(HybridState<Dim>& s) {
    check_cfl(s);
    try {
      advance(s);
    } catch (const TimeStepFailure& e) {
      if (e.step() >= 0) throw;
      throw TimeStepFailure(e.what(), s.step, e.cell());
    } catch (const InvalidState& e) {
      throw TimeStepFailure(e.what(), s.step);
    }
    if (config_.mode == Mode::Hybrid && s.step % config_.decomposition.period == 0) decompose(s);
  }

  /// Advance phase only; the region map is left unchanged.
  void advance(HybridState<Dim>& s) {
    const double dt = config_.dt;
    const double eps = config_.epsilon;
    const std::vector<char> kin = s.regions.mask(Region::Kinetic);
    const std::vector<char> flu = s.regions.mask(Region::Fluid);
    const int nk = s.regions.count(Region::Kinetic);
    const int nf = space_.cells() - nk;
    if (nf > 0) gradient_reconstruct(s.U, s.S, space_, topo_);

    MacroField<Dim> Unew = s.U;
    ReducedDistribution<Dim> R;
    if (nk > 0) {
      ext_.reset(topo_.size(), grid_.size());
      boundary_exterior(ext_, s.f, space_, grid_, topo_, bc_, kin);
      if (nf > 0) fill_fluid_exterior(s, kin);
      R = ReducedDistribution<Dim>(s.f.dofs(), s.f.velocities());
      transport_stage(s.f, R, space_, grid_, topo_, ext_, dt, kin);
    }

    if (nf > 0) {
      FaceFluxTable<Dim> flux(topo_.size(), max_face_nodes(space_));
      for (int id = 0; id < topo_.size(); ++id) {
        const Face& face = topo_[id];
        const bool fm = face.minus >= 0 && !kin[face.minus];
        const bool fp = face.plus >= 0 && !kin[face.plus];
        if (!fm && !fp) continue;
        const bool mixed = (face.minus >= 0 && kin[face.minus]) || (face.plus >= 0 && kin[face.plus]);
        for (int t = 0; t < space_.face_nodes(face.axis); ++t)
          flux(id, t) = mixed ? mixed_fluid_flux(s, id, t, kin) : fluid_face_flux(face, t, s.U, s.S, space_, bc_, eps);
      }
      fluid_update(s.U, s.S, Unew, flux, space_, topo_, eps, dt, flu, s.step);
    }

    if (nk > 0) {
      imex_update(R, Unew, space_, grid_, eps, dt, kin, config_.kinetic, s.step);
      s.f = std::move(R);
    }
    s.U = std::move(Unew);
    s.t += dt;
    ++s.step;
  }

  /// Evaluate both criteria and switch cells; the new map replaces the old one
  /// only after every cell has been evaluated.
  void decompose(HybridState<Dim>& s) {
    const int nc = space_.cells();
    const auto& dc = config_.decomposition;
    const auto cd = cell_center_derivatives(s.U, space_, topo_);
    std::vector<char> breakdown(nc, 0), compression(nc, 0);
    last_lambda_.assign(nc, 0.0);
    for (int c = 0; c < nc; ++c) {
      last_lambda_[c] = indicator_lambda<Dim>(cd[c].m, cd[c].first, cd[c].lap_u, cd[c].lap_rho, config_.epsilon);
      if (!s.regions.kinetic(c)) breakdown[c] = fluid_breakdown(last_lambda_[c], dc);
    }
    const std::vector<char> kin = s.regions.mask(Region::Kinetic);
    GradientField<Dim> local = make_gradient_field(space_);
    local_gradients(s.U, local, space_, topo_, kin);
    for (int c = 0; c < nc; ++c)
      if (kin[c] && !s.regions.forced[c])
        compression[c] = cell_compression_distance(s.f, c, s.U, local, space_, grid_, config_.epsilon) <= dc.delta0;

    const RegionMap next = update_regions(s.regions, breakdown, compression, s.step);
    bool to_kinetic = false;
    for (int c = 0; c < nc; ++c) to_kinetic |= next.label[c] == Region::Kinetic && !s.regions.kinetic(c);
    if (to_kinetic) gradient_reconstruct(s.U, s.S, space_, topo_);
    RegionMap applied = s.regions;
    for (int c = 0; c < nc; ++c) {
      if (next.label[c] == s.regions.label[c]) continue;
      if (switch_cell(s, c, next.label[c])) {
        applied.label[c] = next.label[c];
        applied.last_change[c] = s.step;
        ++s.switches;
      }
    }
    s.regions = std::move(applied);
  }

  /// Move cell c to the other model. Fluid -> Kinetic installs the truncated
  /// pair of (U, S); Kinetic -> Fluid keeps U = moments of f. Returns false
  /// (and changes nothing) if the moments are not a valid state.
  bool switch_cell(HybridState<Dim>& s, int c, Region to) const {
    const int npc = space_.nodes_per_cell();
    if (s.f.dofs() == 0) s.f = ReducedDistribution<Dim>(space_.dofs(), grid_.size());
    for (int n = c * npc; n < (c + 1) * npc; ++n)
      if (!Moments<Dim>::from_conserved(conserved_at(s.U, n)).valid()) return false;
    if (to == Region::Kinetic) {
      for (int n = c * npc; n < (c + 1) * npc; ++n) {
        const Conserved<Dim> u = conserved_at(s.U, n);
        ConservedGradient<Dim> g{};
        for (int d = 0; d < Dim; ++d) g[d] = conserved_at(s.S[d], n);
        s.f.assign(n, ChapmanEnskogPair<Dim>(Moments<Dim>::from_conserved(u), primitive_gradients<Dim>(u, g),
                                             config_.epsilon),
                   grid_);
      }
      std::vector<char> one(space_.cells(), 0);
      one[c] = 1;
      MacroField<Dim> Uc = s.U;
      accumulate_moments(s.f, grid_, space_, Uc, one);
      for (int n = c * npc; n < (c + 1) * npc; ++n)
        if (!Moments<Dim>::from_conserved(conserved_at(Uc, n)).valid()) return false;
      for (int n = c * npc; n < (c + 1) * npc; ++n) store(s.U, n, conserved_at(Uc, n));
    } else {
      for (int j = 0; j < grid_.size(); ++j)
        for (int n = c * npc; n < (c + 1) * npc; ++n) s.f(0, j, n) = s.f(1, j, n) = 0.0;
    }
    s.regions.label[c] = to;
    return true;
  }

  Diagnostics<Dim> diagnostics(const HybridState<Dim>& s) const {
    Diagnostics<Dim> d;
    d.t = s.t;
    d.step = s.step;
    d.total = total_conserved(s.U, space_);
    d.kinetic_cells = s.regions.count(Region::Kinetic);
    d.kinetic_fraction = static_cast<double>(d.kinetic_cells) / space_.cells();
    double vol = 0.0;
    for (int c = 0; c < space_.cells(); ++c)
      if (s.regions.kinetic(c)) vol += space_.mesh().volume(c);
    d.kinetic_volume_fraction = vol / space_.mesh().domain_volume();
    return d;
  }

  /// Indicator values from the most recent region update.
  const std::vector<double>& last_lambda() const { return last_lambda_; }

 private:
  /// Truncated pairs of fluid traces on faces shared with kinetic cells.
  void fill_fluid_exterior(const HybridState<Dim>& s, const std::vector<char>& kin) {
    const int nv = grid_.size();
    for (int id = 0; id < topo_.size(); ++id) {
      const Face& face = topo_[id];
      if (face.boundary()) continue;
      const bool km = kin[face.minus], kp = kin[face.plus];
      if (km == kp) continue;
      const int fc = km ? face.plus : face.minus;
      const int side = km ? 0 : 1;
      const int nt = space_.face_nodes(face.axis);
      double* out = ext_.allocate(id, nt);
      for (int t = 0; t < nt; ++t) {
        const FaceState<Dim> fs = face_state(s.U, s.S, space_, fc, face.axis, side, t);
        const ChapmanEnskogPair<Dim> pair(fs.m, fs.g, config_.epsilon);
        for (int j = 0; j < nv; ++j) {
          const auto [a, b] = pair(grid_.velocity(j));
          out[(static_cast<std::size_t>(t) * nv + j) * 2] = a;
          out[(static_cast<std::size_t>(t) * nv + j) * 2 + 1] = b;
        }
      }
    }
  }

  /// Fluid flux at a kinetic/fluid face: velocity moment of the same upwind
  /// fluxes the kinetic cell receives.
  Conserved<Dim> mixed_fluid_flux(const HybridState<Dim>& s, int id, int t, const std::vector<char>& kin) const {
    const Face& face = topo_[id];
    const int d = face.axis;
    const bool km = kin[face.minus];
    const int kc = km ? face.minus : face.plus;
    const int kside = km ? 1 : 0;
    const int base = space_.dof(kc, 0);
    const int nv = grid_.size();
    Conserved<Dim> F{};
    for (int j = 0; j < nv; ++j) {
      const double v = grid_.component(j, d);
      const bool from_kinetic = (v >= 0.0) == km;
      double a, b;
      if (from_kinetic) {
        a = space_.trace(s.f.slab(0, j) + base, d, kside, t);
        b = space_.trace(s.f.slab(1, j) + base, d, kside, t);
      } else {
        a = ext_.value(id, t, j, 0);
        b = ext_.value(id, t, j, 1);
      }
      const double fa = v * a, fb = v * b;
      F[0] += fa;
      for (int e = 0; e < Dim; ++e) F[1 + e] += grid_.component(j, e) * fa;
      F[Dim + 1] += 0.5 * grid_.speed2(j) * fa + fb;
    }
    for (double& x : F) x *= grid_.weight();
    return F;
  }

  DgSpace<Dim> space_;
  VelocityGrid<Dim> grid_;
  BoundarySpec<Dim> bc_;
  FaceTopology<Dim> topo_;
  HybridConfig config_;
  KineticExterior ext_;
  std::vector<double> last_lambda_;
};

}  // namespace hykin
