#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hykin/boundary.hpp"
#include "hykin/dg_space.hpp"
#include "hykin/errors.hpp"
#include "hykin/reduced.hpp"
#include "hykin/velocity_grid.hpp"

namespace hykin {

/// Distribution plus its moments at one time level.
template <int Dim>
struct KineticState {
  ReducedDistribution<Dim> f;
  MacroField<Dim> U;
  double t = 0.0;
  double epsilon = 1e-2;
  double dt = 0.0;
  long step = 0;
};

struct KineticOptions {
  /// Multiplies the collision frequency in the relaxation; 0 gives pure transport.
  double nu_scale = 1.0;
};

inline double upwind_flux(double v, double f_minus, double f_plus) { return v >= 0.0 ? v * f_minus : v * f_plus; }

/// Largest stable step of the explicit upwind transport.
template <int Dim>
double kinetic_cfl_limit(const DgSpace<Dim>& space, const VelocityGrid<Dim>& grid, double safety = 0.9) {
  double rate = 0.0;
  for (int d = 0; d < Dim; ++d) rate += (2.0 * space.order(d) + 1.0) / space.mesh().axis(d).min_width();
  return safety / (grid.vcut() * rate);
}

template <int Dim>
void check_kinetic_cfl(const DgSpace<Dim>& space, const VelocityGrid<Dim>& grid, double dt) {
  const double limit = kinetic_cfl_limit(space, grid);
  if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12))
    throw ConfigurationError("kinetic CFL violated: dt=" + std::to_string(dt) + " > " + std::to_string(limit));
}

/// Values seen by kinetic cells across faces they do not share with another
/// kinetic cell: boundary ghosts and reconstructed fluid neighbours.
/// Value layout per face: ((t * velocities + j) * 2 + component).
class KineticExterior {
 public:
  static constexpr int kNone = -1;
  static constexpr int kCopy = -2;

  KineticExterior() = default;
  KineticExterior(int faces, int velocities) : offset_(faces, kNone), velocities_(velocities) {}

  void reset(int faces, int velocities) {
    offset_.assign(faces, kNone);
    values_.clear();
    velocities_ = velocities;
  }

  int offset(int face) const { return offset_[face]; }
  void set_copy(int face) { offset_[face] = kCopy; }

  /// Reserve storage for a face with `nodes` face nodes; returns the base pointer.
  double* allocate(int face, int nodes) {
    offset_[face] = static_cast<int>(values_.size());
    values_.resize(values_.size() + static_cast<std::size_t>(nodes) * velocities_ * 2, 0.0);
    return values_.data() + offset_[face];
  }

  double value(int face, int t, int j, int component) const {
    return values_[offset_[face] + (static_cast<std::size_t>(t) * velocities_ + j) * 2 + component];
  }
  const double* face_data(int face) const { return values_.data() + offset_[face]; }
  double* face_data(int face) { return values_.data() + offset_[face]; }
  int velocities() const { return velocities_; }

 private:
  std::vector<int> offset_;
  std::vector<double> values_;
  int velocities_ = 0;
};

/// Ghost pair at a boundary face node. `interior` is the trace of the domain
/// cell; `normal_sign` is +1 on the upper side of axis d, -1 on the lower side;
/// `opposite` is required for periodic boundaries.
template <int Dim>
ReducedPair apply_boundary(const BoundaryKind& bc, int d, int normal_sign, const ReducedPair& interior,
                           const VelocityGrid<Dim>& grid, double tangential = 0.0,
                           const ReducedPair* opposite = nullptr) {
  if (std::holds_alternative<Outflow>(bc)) return interior;
  if (std::holds_alternative<Periodic>(bc)) {
    if (!opposite) throw ConfigurationError("periodic ghost needs the opposite trace");
    return *opposite;
  }
  ReducedPair ghost = interior;
  auto incoming = [&](int j) { return normal_sign * grid.component(j, d) < 0.0; };
  if (const auto* w = std::get_if<EvaporatingWall>(&bc)) {
    if (!(w->T > 0.0) || !(w->p > 0.0)) throw ConfigurationError("evaporating wall needs T_w > 0 and p_w > 0");
    Moments<Dim> m;
    m.rho = w->p / w->T;
    m.T = w->T;
    const ChapmanEnskogPair<Dim> M(m);
    for (int j = 0; j < grid.size(); ++j)
      if (incoming(j)) std::tie(ghost.first[j], ghost.second[j]) = M(grid.velocity(j));
    return ghost;
  }
  const auto& w = std::get<DiffuseMovingWall>(bc);
  Moments<Dim> m;
  m.rho = 1.0;
  m.T = w.T(tangential);
  for (int a = 0; a < Dim; ++a) m.u[a] = w.u[a];
  if (!(m.T > 0.0)) throw ConfigurationError("diffuse wall temperature must be positive");
  const ChapmanEnskogPair<Dim> M(m);
  double out = 0.0, in = 0.0;
  std::vector<std::pair<double, double>> mv(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    const double vn = std::abs(grid.component(j, d));
    if (incoming(j)) {
      mv[j] = M(grid.velocity(j));
      in += vn * mv[j].first;
    } else {
      out += vn * interior.first[j];
    }
  }
  const double sigma = out / in;
  for (int j = 0; j < grid.size(); ++j)
    if (incoming(j)) {
      ghost.first[j] = sigma * mv[j].first;
      ghost.second[j] = sigma * mv[j].second;
    }
  return ghost;
}

/// Trace pair of a distribution at face node t of cell c, side s of axis d.
template <int Dim>
ReducedPair distribution_trace(const ReducedDistribution<Dim>& f, const DgSpace<Dim>& space, int c, int d, int s,
                               int t) {
  const int nv = f.velocities();
  ReducedPair p{std::vector<double>(nv), std::vector<double>(nv)};
  const int base = space.dof(c, 0);
  for (int j = 0; j < nv; ++j) {
    p.first[j] = space.trace(f.slab(0, j) + base, d, s, t);
    p.second[j] = space.trace(f.slab(1, j) + base, d, s, t);
  }
  return p;
}

/// Fill ghost data for every boundary face whose interior cell is kinetic.
template <int Dim>
void boundary_exterior(KineticExterior& ext, const ReducedDistribution<Dim>& f, const DgSpace<Dim>& space,
                       const VelocityGrid<Dim>& grid, const FaceTopology<Dim>& topo, const BoundarySpec<Dim>& bc,
                       const std::vector<char>& kinetic = {}) {
  const int nv = grid.size();
  for (int id = 0; id < topo.size(); ++id) {
    const Face& face = topo[id];
    if (!face.boundary()) continue;
    const int c = face.interior();
    if (!kinetic.empty() && !kinetic[c]) continue;
    const BoundaryKind& kind = bc.side[face.axis][face.side];
    if (std::holds_alternative<Outflow>(kind)) {
      ext.set_copy(id);
      continue;
    }
    const int nt = space.face_nodes(face.axis);
    double* out = ext.allocate(id, nt);
    for (int t = 0; t < nt; ++t) {
      const ReducedPair in = distribution_trace(f, space, c, face.axis, face.side, t);
      const ReducedPair g = apply_boundary<Dim>(kind, face.axis, face.side == 1 ? 1 : -1, in, grid,
                                                tangential_coordinate(space, c, face.axis, face.side, t));
      for (int j = 0; j < nv; ++j) {
        out[(static_cast<std::size_t>(t) * nv + j) * 2] = g.first[j];
        out[(static_cast<std::size_t>(t) * nv + j) * 2 + 1] = g.second[j];
      }
    }
  }
}

namespace detail {

template <int Dim>
std::array<std::vector<double>, Dim> inverse_widths(const DgSpace<Dim>& space) {
  std::array<std::vector<double>, Dim> inv;
  for (int d = 0; d < Dim; ++d) {
    inv[d].resize(space.cells());
    for (int c = 0; c < space.cells(); ++c) inv[d][c] = 1.0 / space.mesh().width(c, d);
  }
  return inv;
}

}  // namespace detail

/// Explicit upwind DG transport R = f - dt div(v f) on the cells flagged in
/// `kinetic` (empty = all). Faces to non-kinetic neighbours or boundaries read
/// their upwind value from `ext`.
template <int Dim>
void transport_stage(const ReducedDistribution<Dim>& f, ReducedDistribution<Dim>& R, const DgSpace<Dim>& space,
                     const VelocityGrid<Dim>& grid, const FaceTopology<Dim>& topo, const KineticExterior& ext,
                     double dt, const std::vector<char>& kinetic = {}) {
  const int ncell = space.cells();
  const int npc = space.nodes_per_cell();
  const int nv = grid.size();
  if (R.dofs() != f.dofs() || R.velocities() != f.velocities()) R = ReducedDistribution<Dim>(f.dofs(), nv);
  auto is_kin = [&](int c) { return c >= 0 && (kinetic.empty() || kinetic[c] != 0); };
  const auto inv_h = detail::inverse_widths(space);

  struct FacePlan {
    int id, minus, plus;
    bool km, kp, copy;
    double hm, hp;
  };
  std::array<std::vector<FacePlan>, Dim> plan;
  for (int id = 0; id < topo.size(); ++id) {
    const Face& face = topo[id];
    const bool km = is_kin(face.minus), kp = is_kin(face.plus);
    if (!km && !kp) continue;
    plan[face.axis].push_back({id, face.minus, face.plus, km, kp, ext.offset(id) == KineticExterior::kCopy,
                               km ? inv_h[face.axis][face.minus] : 0.0, kp ? inv_h[face.axis][face.plus] : 0.0});
  }
  std::vector<int> cells;
  for (int c = 0; c < ncell; ++c)
    if (is_kin(c)) cells.push_back(c);

  for (int j = 0; j < nv; ++j) {
    for (int comp = 0; comp < 2; ++comp) {
      const double* q = f.slab(comp, j);
      double* r = R.slab(comp, j);
      for (int c : cells) std::copy(q + c * npc, q + (c + 1) * npc, r + c * npc);

      for (int d = 0; d < Dim; ++d) {
        const double v = grid.component(j, d);
        if (v == 0.0) continue;
        const NodalBasis& b = space.basis(d);
        const int nl = b.size();
        const int nt = space.face_nodes(d);
        const auto& G = b.stiffness();
        const auto& lr = b.lift_right();
        const auto& ll = b.lift_left();
        const bool up = v > 0.0;
        const auto& phi_up = up ? b.right_trace() : b.left_trace();
        const auto& phi_down = up ? b.left_trace() : b.right_trace();

        if (nl > 1) {
          for (int c : cells) {
            const double coef = dt * v * inv_h[d][c];
            const double* qc = q + c * npc;
            double* rc = r + c * npc;
            for (int t = 0; t < nt; ++t) {
              const int* line = space.line(d, t);
              for (int k = 0; k < nl; ++k) {
                double s = 0.0;
                for (int l = 0; l < nl; ++l) s += G[k * nl + l] * qc[line[l]];
                rc[line[k]] += coef * s;
              }
            }
          }
        }

        for (const FacePlan& fp : plan[d]) {
          const bool inner = up ? fp.km : fp.kp;
          const int src = up ? fp.minus : fp.plus;
          const int other = up ? fp.plus : fp.minus;
          for (int t = 0; t < nt; ++t) {
            const int* line = space.line(d, t);
            double value;
            if (inner || fp.copy) {
              const double* qc = q + (inner ? src : other) * npc;
              const auto& phi = inner ? phi_up : phi_down;
              value = 0.0;
              for (int l = 0; l < nl; ++l) value += phi[l] * qc[line[l]];
            } else {
              value = ext.value(fp.id, t, j, comp);
            }
            const double F = dt * v * value;
            if (fp.km) {
              double* rc = r + fp.minus * npc;
              const double coef = fp.hm * F;
              for (int k = 0; k < nl; ++k) rc[line[k]] -= coef * lr[k];
            }
            if (fp.kp) {
              double* rc = r + fp.plus * npc;
              const double coef = fp.hp * F;
              for (int k = 0; k < nl; ++k) rc[line[k]] += coef * ll[k];
            }
          }
        }
      }
    }
  }
}

/// Implicit relaxation towards the Maxwellian of the transported moments:
/// f = (eps R + nu dt M(U(R))) / (eps + nu dt), in place on R. U receives the
/// moments of R on the relaxed cells. M is scaled so its discrete density is rho.
template <int Dim>
void imex_update(ReducedDistribution<Dim>& R, MacroField<Dim>& U, const DgSpace<Dim>& space,
                 const VelocityGrid<Dim>& grid, double epsilon, double dt, const std::vector<char>& kinetic = {},
                 const KineticOptions& options = {}, long step = -1) {
  accumulate_moments(R, grid, space, U, kinetic);
  const int npc = space.nodes_per_cell();
  struct NodeRelax {
    int dof;
    double keep, relax, norm, second;
  };
  const int na = grid.points_per_axis();
  const auto& axis = grid.axis_nodes();
  std::vector<NodeRelax> nodes;
  std::vector<double> factors;
  nodes.reserve(space.dofs());
  const double half_dim = Dim == 1 ? 1.0 : 0.5;
  for (int c = 0; c < space.cells(); ++c) {
    if (!kinetic.empty() && !kinetic[c]) continue;
    for (int n = c * npc; n < (c + 1) * npc; ++n) {
      const Moments<Dim> m = Moments<Dim>::from_conserved(conserved_at(U, n));
      if (!m.valid())
        throw TimeStepFailure("relaxation: invalid moments (rho=" + std::to_string(m.rho) +
                                  ", T=" + std::to_string(m.T) + ") in cell " + std::to_string(c),
                              step, c);
      const double nudt = options.nu_scale * collision_frequency(m) * dt;
      double mass = grid.weight();
      for (int d = 0; d < Dim; ++d) {
        double sum = 0.0;
        for (int i = 0; i < na; ++i) {
          const double e = std::exp(-(axis[i] - m.u[d]) * (axis[i] - m.u[d]) / (2.0 * m.T));
          factors.push_back(e);
          sum += e;
        }
        mass *= sum;
      }
      if (!(mass > 0.0))
        throw TimeStepFailure("relaxation: Maxwellian unresolved on the velocity grid in cell " + std::to_string(c),
                              step, c);
      nodes.push_back({n, epsilon / (epsilon + nudt), nudt / (epsilon + nudt), m.rho / mass, half_dim * m.T});
    }
  }
  const std::size_t stride = static_cast<std::size_t>(Dim) * na;
  for (int j = 0; j < grid.size(); ++j) {
    double* a = R.slab(0, j);
    double* b = R.slab(1, j);
    const int i0 = grid.axis_index(j, 0);
    const int i1 = Dim == 2 ? na + grid.axis_index(j, Dim - 1) : 0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const NodeRelax& nr = nodes[k];
      if (nr.relax == 0.0) continue;
      const double* fac = factors.data() + k * stride;
      double M1 = nr.norm * fac[i0];
      if constexpr (Dim == 2) M1 *= fac[i1];
      a[nr.dof] = nr.keep * a[nr.dof] + nr.relax * M1;
      b[nr.dof] = nr.keep * b[nr.dof] + nr.relax * nr.second * M1;
    }
  }
}

/// Set f to the reduced Maxwellian of `init(x)` at every node and U to its
/// discrete moments.
template <int Dim, class Init>
KineticState<Dim> make_kinetic_state(const DgSpace<Dim>& space, const VelocityGrid<Dim>& grid, const Init& init,
                                     double epsilon, double dt) {
  KineticState<Dim> s;
  s.f = ReducedDistribution<Dim>(space.dofs(), grid.size());
  s.U = make_macro_field(space);
  s.epsilon = epsilon;
  s.dt = dt;
  for (int c = 0; c < space.cells(); ++c)
    for (int n = 0; n < space.nodes_per_cell(); ++n) {
      const Moments<Dim> m = init(space.node_position(c, n));
      require_valid(m, "initial data");
      s.f.assign(space.dof(c, n), ChapmanEnskogPair<Dim>(m), grid);
    }
  accumulate_moments(s.f, grid, space, s.U);
  return s;
}

/// Standalone kinetic solver on the whole mesh.
template <int Dim>
class KineticSolver {
 public:
  KineticSolver(DgSpace<Dim> space, VelocityGrid<Dim> grid, BoundarySpec<Dim> bc, KineticOptions options = {})
      : space_(std::move(space)), grid_(std::move(grid)), bc_(std::move(bc)), topo_(space_.mesh(), bc_),
        options_(options) {}

  const DgSpace<Dim>& space() const { return space_; }
  const VelocityGrid<Dim>& grid() const { return grid_; }
  const FaceTopology<Dim>& topology() const { return topo_; }
  const BoundarySpec<Dim>& boundary() const { return bc_; }

  /// R = transported distribution (no relaxation).
  ReducedDistribution<Dim> transport(const KineticState<Dim>& s) {
    check_kinetic_cfl(space_, grid_, s.dt);
    ext_.reset(topo_.size(), grid_.size());
    boundary_exterior(ext_, s.f, space_, grid_, topo_, bc_);
    ReducedDistribution<Dim> R(s.f.dofs(), s.f.velocities());
    transport_stage(s.f, R, space_, grid_, topo_, ext_, s.dt);
    return R;
  }

  void step(KineticState<Dim>& s) {
    ReducedDistribution<Dim> R = transport(s);
    imex_update(R, s.U, space_, grid_, s.epsilon, s.dt, {}, options_, s.step);
    s.f = std::move(R);
    s.t += s.dt;
    ++s.step;
  }

 private:
  DgSpace<Dim> space_;
  VelocityGrid<Dim> grid_;
  BoundarySpec<Dim> bc_;
  FaceTopology<Dim> topo_;
  KineticOptions options_;
  KineticExterior ext_;
};

}  // namespace hykin
