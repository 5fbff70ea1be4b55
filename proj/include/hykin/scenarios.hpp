#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "hykin/boundary.hpp"
#include "hykin/dg_space.hpp"
#include "hykin/errors.hpp"
#include "hykin/hybrid.hpp"
#include "hykin/velocity_grid.hpp"

namespace hykin {

/// A complete problem setup: mesh, discretization, data and run parameters.
/// dt = 0 selects the stability-limited default.
template <int Dim>
struct ScenarioSpec {
  std::string name = "custom";
  double epsilon = 1e-2;
  Mesh<Dim> mesh;
  std::array<int, Dim> order{};
  double dt = 0.0;
  double t_final = 0.0;
  double vcut = 8.0;
  int nv = 32;
  BoundarySpec<Dim> bc;
  double forced_band = 0.0;
  Mode mode = Mode::Hybrid;
  std::function<Moments<Dim>(const std::array<double, Dim>&)> initial;

  DgSpace<Dim> space() const { return DgSpace<Dim>(mesh, order); }
  VelocityGrid<Dim> grid() const { return VelocityGrid<Dim>(vcut, nv); }

  void validate() const {
    if (!(epsilon > 0.0)) throw ConfigurationError("epsilon must be positive");
    if (t_final < 0.0) throw ConfigurationError("t_final must be non-negative");
    if (dt < 0.0) throw ConfigurationError("dt must be non-negative");
    if (!(vcut > 0.0) || nv < 2) throw ConfigurationError("velocity grid needs vcut > 0 and nv >= 2");
    for (int d = 0; d < Dim; ++d) {
      if (order[d] < 0) throw ConfigurationError("order must be non-negative");
      if (2.0 * forced_band >= mesh.axis(d).length() && forced_band > 0.0)
        throw ConfigurationError("forced_band must be below half the domain");
    }
    if (!initial) throw ConfigurationError("scenario has no initial data");
    bc.validate();
    const DgSpace<Dim> sp = space();
    for (int c = 0; c < sp.cells(); ++c)
      for (int n = 0; n < sp.nodes_per_cell(); ++n) {
        const Moments<Dim> m = initial(sp.node_position(c, n));
        if (!m.valid()) throw ConfigurationError("initial data not positive in cell " + std::to_string(c));
      }
  }
};

/// Graded evaporation mesh on [0, 1]: nx/4 cells in each 0.05 wall band and
/// nx/2 cells across the central 0.9.
inline Axis evaporation_axis(int nx) {
  if (nx < 4 || nx % 4 != 0) throw ConfigurationError("evaporation mesh needs nx divisible by 4, got " + std::to_string(nx));
  const int nb = nx / 4, nm = nx / 2;
  std::vector<double> e;
  e.reserve(nx + 1);
  for (int i = 0; i < nb; ++i) e.push_back(0.05 * i / nb);
  for (int i = 0; i < nm; ++i) e.push_back(0.05 + 0.9 * i / nm);
  for (int i = 0; i <= nb; ++i) e.push_back(0.95 + 0.05 * i / nb);
  e.back() = 1.0;
  return Axis(std::move(e));
}

/// Evaporation and condensation between two condensed phases at x = 0 and x = 1.
inline ScenarioSpec<1> build_evaporation(bool weak, int nx = 40, double epsilon = 1e-3) {
  ScenarioSpec<1> s;
  s.name = weak ? "evap_weak" : "evap_strong";
  s.epsilon = epsilon;
  s.mesh = Mesh<1>({evaporation_axis(nx)});
  s.order = {1};
  s.t_final = 100.0;
  const double Tl = weak ? 1.0 : 0.5, pl = weak ? 1.0 : 0.01;
  const double Tr = weak ? 1.002 : 1.0, pr = weak ? 1.02 : 1.0;
  s.bc.side[0] = {EvaporatingWall{Tl, pl}, EvaporatingWall{Tr, pr}};
  s.forced_band = 0.1;
  s.initial = [=](const std::array<double, 1>& x) {
    Moments<1> m;
    m.T = Tl + (Tr - Tl) * x[0];
    m.rho = (pl + (pr - pl) * x[0]) / m.T;
    m.u = {0.0};
    return m;
  };
  return s;
}

/// Four-quadrant Riemann problem on [-1/2, 1/2]^2 with outflow boundaries.
inline ScenarioSpec<2> build_riemann2d(int n = 80, double epsilon = 1e-2) {
  if (n < 2) throw ConfigurationError("riemann2d needs N >= 2");
  ScenarioSpec<2> s;
  s.name = "riemann2d";
  s.epsilon = epsilon;
  s.mesh = Mesh<2>({Axis::uniform(-0.5, 0.5, n), Axis::uniform(-0.5, 0.5, n)});
  s.order = {0, 0};
  s.t_final = 0.35;
  s.nv = 64;
  s.bc = BoundarySpec<2>::all(Outflow{});
  s.initial = [](const std::array<double, 2>& x) {
    // (rho, p, u, v) for quadrants 1..4 counter-clockwise from x > 0, y > 0.
    static constexpr double q[4][4] = {{1.5, 1.5, 0.0, 0.0},
                                       {0.6429, 0.3, 1.0328, 0.0},
                                       {0.1891, 0.0143, 1.0328, 1.0328},
                                       {0.6429, 0.3, 0.0, 1.0328}};
    const int k = x[0] > 0.0 ? (x[1] > 0.0 ? 0 : 3) : (x[1] > 0.0 ? 1 : 2);
    Moments<2> m;
    m.rho = q[k][0];
    m.T = q[k][1] / q[k][0];
    m.u = {q[k][2], q[k][3]};
    return m;
  };
  return s;
}

/// Wall temperature of the ghost-effect problem.
inline double ghost_wall_temperature(double x) { return 1.0 - 0.5 * std::cos(2.0 * std::numbers::pi * x); }

/// Gas between walls at y = 0 and y = 1 sharing T_w(x) and moving with (eps, 0);
/// periodic in x.
inline ScenarioSpec<2> build_ghost2d(int n = 40, double epsilon = 0.02) {
  if (n < 2) throw ConfigurationError("ghost2d needs N >= 2");
  ScenarioSpec<2> s;
  s.name = "ghost2d";
  s.epsilon = epsilon;
  s.mesh = Mesh<2>({Axis::uniform(0.0, 1.0, n), Axis::uniform(0.0, 1.0, n)});
  s.order = {1, 1};
  s.dt = 1.0 / 5000.0;
  s.t_final = 80.0;
  s.nv = 16;
  s.vcut = 8.0;
  const DiffuseMovingWall wall{ghost_wall_temperature, {epsilon, 0.0}};
  s.bc.side[0] = {Periodic{}, Periodic{}};
  s.bc.side[1] = {wall, wall};
  s.forced_band = 0.1;
  s.initial = [](const std::array<double, 2>& x) {
    Moments<2> m;
    m.rho = 1.0;
    m.T = ghost_wall_temperature(x[0]);
    return m;
  };
  return s;
}

}  // namespace hykin
