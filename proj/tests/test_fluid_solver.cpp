#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace hykin;
using oracle::m1;
using oracle::m2;

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;

PrimitiveGradients<1> grad1(double du, double dT, double drho = 0.0) {
  PrimitiveGradients<1> g;
  g.drho = {drho};
  g.du[0][0] = du;
  g.dT = {dT};
  return g;
}

PrimitiveGradients<2> random_grad2(oracle::Rng& rng, double scale) {
  PrimitiveGradients<2> g;
  for (int a = 0; a < 2; ++a) {
    g.drho[a] = rng.uniform(-scale, scale);
    g.dT[a] = rng.uniform(-scale, scale);
    for (int b = 0; b < 2; ++b) g.du[a][b] = rng.uniform(-scale, scale);
  }
  return g;
}

/// Half-line Gaussian moment by direct quadrature.
double split_quadrature(int n, int m, double rho, double u, double T, HalfLine side) {
  auto f = [&](double v) {
    const double V = (v - u) / std::sqrt(T);
    return rho / std::sqrt(2.0 * std::numbers::pi * T) * std::pow(v, n) * std::pow(V, m) * std::exp(-0.5 * V * V);
  };
  const double L = std::abs(u) + 14.0 * std::sqrt(T);
  return side == HalfLine::Upper ? oracle::integrate(f, 0.0, L) : oracle::integrate(f, -L, 0.0);
}

}  // namespace

TEST(HalfMoments, ClosedFormExamples) {
  EXPECT_NEAR(half_moment(0, 0.0), kSqrtPi / 2.0, 1e-15);
  EXPECT_NEAR(half_moment(1, 1.0), 0.5 * std::exp(-1.0), 1e-15);
  EXPECT_NEAR(half_moment(5, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(half_moment(6, 0.5), oracle::half_moment(6, 0.5), 1e-13);
}

TEST(HalfMoments, MatchQuadratureForAllOrders) {
  for (int n = 0; n <= 6; ++n)
    for (double s : {-3.0, -1.2, -0.3, 0.0, 0.4, 1.7, 3.5})
      EXPECT_NEAR(half_moment(n, s), oracle::half_moment(n, s), 1e-12) << "n=" << n << " s=" << s;
}

TEST(HalfMoments, ComplementSumsToFullMoment) {
  for (int n = 0; n <= 6; ++n) {
    const double full = n % 2 == 1 ? 0.0 : std::tgamma(0.5 * (n + 1));
    for (double s : {-2.0, -0.5, 0.0, 0.7, 2.5})
      EXPECT_NEAR(half_moment(n, s) + (n % 2 == 0 ? 1.0 : -1.0) * half_moment(n, -s), full, 1e-13);
  }
}

TEST(HalfMoments, OutOfRangeOrderRejected) {
  EXPECT_THROW(half_moment(7, 0.0), ParameterError);
  EXPECT_THROW(half_moment(-1, 0.0), ParameterError);
  EXPECT_THROW(split_gaussian_moment(4, 0, 1.0, 0.0, 1.0, HalfLine::Upper), ParameterError);
  EXPECT_THROW(split_gaussian_moment(0, -1, 1.0, 0.0, 1.0, HalfLine::Upper), ParameterError);
}

TEST(SplitGaussian, HalvesSumToDensityAndMomentum) {
  for (auto [rho, u, T] : {std::tuple{1.0, 0.0, 1.0}, {0.3, 1.4, 0.2}, {2.5, -0.8, 1.9}}) {
    const double m0 = split_gaussian_moment(0, 0, rho, u, T, HalfLine::Upper) +
                      split_gaussian_moment(0, 0, rho, u, T, HalfLine::Lower);
    const double m1v = split_gaussian_moment(1, 0, rho, u, T, HalfLine::Upper) +
                       split_gaussian_moment(1, 0, rho, u, T, HalfLine::Lower);
    EXPECT_NEAR(m0, rho, 1e-14);
    EXPECT_NEAR(m1v, rho * u, 1e-14);
  }
}

TEST(SplitGaussian, UpperMassFluxAtRest) {
  EXPECT_NEAR(split_gaussian_moment(1, 0, 1.0, 0.0, 1.0, HalfLine::Upper), 1.0 / std::sqrt(2.0 * std::numbers::pi),
              1e-15);
}

TEST(SplitGaussian, RandomStatesMatchQuadrature) {
  oracle::Rng rng;
  for (int trial = 0; trial < 12; ++trial) {
    const double rho = rng.uniform(0.2, 3.0), u = rng.uniform(-2.0, 2.0), T = rng.uniform(0.1, 2.0);
    for (HalfLine side : {HalfLine::Upper, HalfLine::Lower}) {
      const SplitGaussianTable S(rho, u, T, side);
      for (int n = 0; n < 4; ++n)
        for (int m = 0; m < 4; ++m) {
          const double ref = split_quadrature(n, m, rho, u, T, side);
          EXPECT_NEAR(S(n, m), ref, 1e-11 * std::max(1.0, std::abs(ref))) << n << "," << m;
        }
    }
  }
}

TEST(Kfvs, EqualEquilibriumStatesGiveEulerFlux) {
  for (const auto& m : {m1(1.0, 0.0, 1.0), m1(0.4, 1.3, 0.6), m1(2.0, -0.7, 1.5)}) {
    const Conserved<1> F = kfvs_interface_flux_1d(m, {}, m, {}, 0.0);
    const Conserved<1> E = euler_flux(m, 0);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(F[k], E[k], 1e-13);
  }
  oracle::Rng rng;
  for (int trial = 0; trial < 10; ++trial) {
    const Moments<2> m = m2(rng.uniform(0.2, 2.0), rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(0.2, 2.0));
    for (int axis = 0; axis < 2; ++axis) {
      const Conserved<2> F = kfvs_interface_flux_2d(m, {}, m, {}, 0.0, axis);
      const Conserved<2> E = euler_flux(m, axis);
      for (int k = 0; k < 4; ++k) EXPECT_NEAR(F[k], E[k], 1e-13);
    }
  }
}

TEST(Kfvs, EqualStatesWithGradientsGiveNavierStokesFlux) {
  oracle::Rng rng;
  for (int trial = 0; trial < 10; ++trial) {
    const Moments<1> m = m1(rng.uniform(0.3, 2.0), rng.uniform(-1.0, 1.0), rng.uniform(0.3, 1.5));
    const auto g = grad1(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    const double eps = 0.05;
    const Conserved<1> F = kfvs_interface_flux_1d(m, g, m, g, eps);
    const Conserved<1> N = navier_stokes_flux(m, g, eps, 0);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(F[k], N[k], 1e-13);

    const Moments<2> m2d = m2(rng.uniform(0.3, 2.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(0.3, 1.5));
    const auto g2 = random_grad2(rng, 1.0);
    for (int axis = 0; axis < 2; ++axis) {
      const Conserved<2> F2 = kfvs_interface_flux_2d(m2d, g2, m2d, g2, eps, axis);
      const Conserved<2> N2 = navier_stokes_flux(m2d, g2, eps, axis);
      for (int k = 0; k < 4; ++k) EXPECT_NEAR(F2[k], N2[k], 1e-13);
    }
  }
}

TEST(Kfvs, InviscidMatchesErfcSplitting) {
  oracle::Rng rng;
  for (int trial = 0; trial < 50; ++trial) {
    const Moments<1> L = m1(rng.uniform(0.1, 3.0), rng.uniform(-2.0, 2.0), rng.uniform(0.1, 2.0));
    const Moments<1> R = m1(rng.uniform(0.1, 3.0), rng.uniform(-2.0, 2.0), rng.uniform(0.1, 2.0));
    const Conserved<1> F = kfvs_interface_flux_1d(L, {}, R, {}, 0.0);
    const auto ref = oracle::kfvs_euler_1d(L, R);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(F[k], ref[k], 1e-13 * std::max(1.0, std::abs(ref[k])));
  }
}

TEST(Kfvs, ViscousExampleMatchesVelocityQuadrature) {
  const Moments<1> L = m1(1.0, 0.0, 1.0), R = m1(1.2, 0.1, 0.9);
  const double eps = 1e-2;
  const Conserved<1> F = kfvs_interface_flux_1d(L, grad1(0.0, 0.1), R, grad1(0.0, 0.1), eps);
  const auto ref = oracle::brute_flux_1d(L, 0.0, 0.1, R, 0.0, 0.1, eps);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(F[k], ref[k], 1e-8);
}

TEST(Kfvs, RandomOneDimensionalMatchesQuadrature) {
  oracle::Rng rng;
  for (int trial = 0; trial < 30; ++trial) {
    const Moments<1> L = m1(rng.uniform(0.2, 2.0), rng.uniform(-1.5, 1.5), rng.uniform(0.2, 2.0));
    const Moments<1> R = m1(rng.uniform(0.2, 2.0), rng.uniform(-1.5, 1.5), rng.uniform(0.2, 2.0));
    const double duL = rng.uniform(-2, 2), dTL = rng.uniform(-2, 2), duR = rng.uniform(-2, 2), dTR = rng.uniform(-2, 2);
    const double eps = rng.uniform(1e-3, 0.1);
    const Conserved<1> F = kfvs_interface_flux_1d(L, grad1(duL, dTL), R, grad1(duR, dTR), eps);
    const auto ref = oracle::brute_flux_1d(L, duL, dTL, R, duR, dTR, eps);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(F[k], ref[k], 1e-8);
  }
}

TEST(Kfvs, RandomTwoDimensionalMatchesQuadrature) {
  oracle::Rng rng;
  for (int trial = 0; trial < 6; ++trial) {
    const Moments<2> L = m2(rng.uniform(0.3, 2.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(0.3, 1.5));
    const Moments<2> R = m2(rng.uniform(0.3, 2.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(0.3, 1.5));
    const auto gL = random_grad2(rng, 1.0), gR = random_grad2(rng, 1.0);
    const double eps = rng.uniform(1e-3, 0.05);
    const int axis = trial % 2;
    const Conserved<2> F = kfvs_interface_flux_2d(L, gL, R, gR, eps, axis);
    const auto ref = oracle::brute_flux_2d(L, gL, R, gR, eps, axis);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(F[k], ref[k], 1e-7);
  }
}

TEST(ViscousFlux, VanishesWithoutGradients) {
  const Conserved<2> F = viscous_volume_flux(m2(1.3, 0.4, -0.2, 0.8), PrimitiveGradients<2>{}, 0);
  for (double x : F) EXPECT_EQ(x, 0.0);
}

TEST(ViscousFlux, DeformationSymmetricAndTraceFree) {
  oracle::Rng rng;
  const auto g = random_grad2(rng, 2.0);
  const auto D = deformation_tensor(g);
  EXPECT_NEAR(D[0][1], D[1][0], 1e-15);
  const double div = g.du[0][0] + g.du[1][1];
  EXPECT_NEAR(D[0][0] + D[1][1], 2.0 * div - 4.0 / 3.0 * div, 1e-14);
}

TEST(ViscousFlux, OneDimensionalStress) {
  const Moments<1> m = m1(1.4, 0.3, 0.8);
  const double du = 0.7, dT = -0.4;
  const Conserved<1> F = viscous_volume_flux(m, grad1(du, dT), 0);
  const double nu = 2.0 * m.rho / kSqrtPi;
  const double mu = m.rho * m.T / nu, kappa = 2.5 * m.rho * m.T / nu;
  EXPECT_EQ(F[0], 0.0);
  EXPECT_NEAR(F[1], 4.0 / 3.0 * mu * du, 1e-15);
  EXPECT_NEAR(F[2], 4.0 / 3.0 * mu * du * m.u[0] + kappa * dT, 1e-15);
}

TEST(GradientReconstruct, ConstantGivesZero) {
  const DgSpace<1> space(Mesh<1>({Axis::uniform(0.0, 1.0, 6)}), 2);
  const auto bc = BoundarySpec<1>::all(Periodic{});
  auto s = make_fluid_state(space, [](const std::array<double, 1>&) { return m1(1.2, 0.3, 0.9); }, 0.01, 1e-3);
  gradient_reconstruct(s.U, s.S, space, FaceTopology<1>(space.mesh(), bc));
  for (const auto& comp : s.S[0])
    for (double x : comp.values()) EXPECT_NEAR(x, 0.0, 1e-13);
}

TEST(GradientReconstruct, LinearIsExactWithOutflow) {
  const DgSpace<2> space(Mesh<2>({Axis({0.0, 0.3, 0.45, 1.0}), Axis::uniform(0.0, 1.0, 4)}), 1);
  const auto bc = BoundarySpec<2>::all(Outflow{});
  // rho linear, zero velocity, T chosen so the energy is linear too.
  auto s = make_fluid_state(space, [](const std::array<double, 2>& x) {
    return m2(1.0 + 0.5 * x[0] - 0.3 * x[1], 0.0, 0.0, 1.0);
  }, 0.01, 1e-3);
  gradient_reconstruct(s.U, s.S, space, FaceTopology<2>(space.mesh(), bc));
  for (std::size_t i = 0; i < s.S[0][0].size(); ++i) {
    EXPECT_NEAR(s.S[0][0][i], 0.5, 1e-12);
    EXPECT_NEAR(s.S[1][0][i], -0.3, 1e-12);
    EXPECT_NEAR(s.S[0][3][i], 0.75, 1e-12);
    EXPECT_NEAR(s.S[1][3][i], -0.45, 1e-12);
  }
}

TEST(GradientReconstruct, SmoothConvergence) {
  const auto bc = BoundarySpec<1>::all(Periodic{});
  for (int K : {1, 2}) {
    std::vector<double> err;
    for (int n : {8, 16, 32}) {
      const DgSpace<1> space(Mesh<1>({Axis::uniform(0.0, 1.0, n)}), K);
      auto s = make_fluid_state(space, [](const std::array<double, 1>& x) {
        return m1(1.0 + 0.2 * std::sin(2.0 * std::numbers::pi * x[0]), 0.0, 1.0);
      }, 0.01, 1e-3);
      gradient_reconstruct(s.U, s.S, space, FaceTopology<1>(space.mesh(), bc));
      double e = 0.0;
      for (int c = 0; c < space.cells(); ++c)
        for (int k = 0; k < space.nodes_per_cell(); ++k) {
          const double x = space.node_position(c, k)[0];
          e = std::max(e, std::abs(s.S[0][0][space.dof(c, k)] - 0.4 * std::numbers::pi * std::cos(2.0 * std::numbers::pi * x)));
        }
      err.push_back(e);
    }
    for (std::size_t i = 1; i < err.size(); ++i) EXPECT_GT(std::log2(err[i - 1] / err[i]), K - 0.2) << "K=" << K;
  }
}

TEST(FluidStep, UniformPeriodicStateUnchanged) {
  const DgSpace<2> space(Mesh<2>({Axis::uniform(0.0, 1.0, 5), Axis::uniform(0.0, 1.0, 4)}), 1);
  const auto bc = BoundarySpec<2>::all(Periodic{});
  const Moments<2> m = m2(1.3, 0.4, -0.2, 0.8);
  auto s = make_fluid_state(space, [&](const std::array<double, 2>&) { return m; }, 0.02, 1e-3);
  const auto U0 = s.U;
  FluidSolver<2> solver(space, bc);
  for (int i = 0; i < 5; ++i) solver.step(s);
  for (int k = 0; k < 4; ++k)
    for (std::size_t i = 0; i < U0[k].size(); ++i) EXPECT_NEAR(s.U[k][i], U0[k][i], 1e-13);
  EXPECT_EQ(s.step, 5);
  EXPECT_NEAR(s.t, 5e-3, 1e-15);
}

TEST(FluidStep, PiecewiseConstantInviscidMatchesFiniteVolume) {
  const int n = 12;
  const Mesh<1> mesh({Axis::uniform(0.0, 1.0, n)});
  const DgSpace<1> space(mesh, 0);
  const auto bc = BoundarySpec<1>::all(Periodic{});
  auto init = [](const std::array<double, 1>& x) {
    return m1(1.0 + 0.3 * std::sin(2.0 * std::numbers::pi * x[0]), 0.2 * std::cos(2.0 * std::numbers::pi * x[0]),
              0.9 + 0.1 * std::sin(4.0 * std::numbers::pi * x[0]));
  };
  const double dt = 2e-3;
  auto s = make_fluid_state(space, init, 0.0, dt);
  std::vector<Moments<1>> cells(n);
  for (int i = 0; i < n; ++i) cells[i] = init({mesh.axis(0).center(i)});
  const FluidState<1> next = ns_step(s, space, bc);
  const double h = 1.0 / n;
  for (int i = 0; i < n; ++i) {
    const auto Fr = oracle::kfvs_euler_1d(cells[i], cells[(i + 1) % n]);
    const auto Fl = oracle::kfvs_euler_1d(cells[(i + n - 1) % n], cells[i]);
    const Conserved<1> U = cells[i].conserved();
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(next.U[k][i], U[k] - dt / h * (Fr[k] - Fl[k]), 1e-12);
  }
}

TEST(FluidStep, PeriodicConservation) {
  const DgSpace<2> space(Mesh<2>({Axis({0.0, 0.2, 0.5, 0.6, 1.0}), Axis::uniform(0.0, 1.0, 5)}), 1);
  const auto bc = BoundarySpec<2>::all(Periodic{});
  auto s = make_fluid_state(space, [](const std::array<double, 2>& x) {
    const double a = 2.0 * std::numbers::pi * x[0], b = 2.0 * std::numbers::pi * x[1];
    return m2(1.0 + 0.2 * std::sin(a) * std::cos(b), 0.3 * std::cos(b), -0.2 * std::sin(a), 1.0 + 0.1 * std::cos(a + b));
  }, 0.05, 0.0);
  s.dt = 0.5 * fluid_cfl_limit(s.U, space, s.epsilon);
  auto totals = [&](const MacroField<2>& U) {
    std::array<double, 4> t{};
    for (int c = 0; c < space.cells(); ++c)
      for (int k = 0; k < space.nodes_per_cell(); ++k) {
        const double w = space.node_weight(c, k);
        for (int q = 0; q < 4; ++q) t[q] += w * U[q][space.dof(c, k)];
      }
    return t;
  };
  const auto before = totals(s.U);
  FluidSolver<2> solver(space, bc);
  for (int i = 0; i < 20; ++i) solver.step(s);
  const auto after = totals(s.U);
  for (int q = 0; q < 4; ++q) EXPECT_NEAR(after[q], before[q], 1e-12);
}

TEST(FluidStep, RefusesStepAboveStabilityLimit) {
  const DgSpace<1> space(Mesh<1>({Axis::uniform(0.0, 1.0, 10)}), 1);
  auto s = make_fluid_state(space, [](const std::array<double, 1>&) { return m1(1.0, 0.0, 1.0); }, 0.01, 0.0);
  s.dt = 1.5 * fluid_cfl_limit(s.U, space, s.epsilon);
  FluidSolver<1> solver(space, BoundarySpec<1>::all(Periodic{}));
  EXPECT_THROW(solver.step(s), ConfigurationError);
  EXPECT_EQ(s.step, 0);
}

TEST(FluidStep, GalileanShiftOfUniformState) {
  const DgSpace<1> space(Mesh<1>({Axis::uniform(0.0, 1.0, 8)}), 2);
  const auto bc = BoundarySpec<1>::all(Periodic{});
  for (double u : {-0.8, 0.0, 1.1}) {
    auto s = make_fluid_state(space, [&](const std::array<double, 1>&) { return m1(0.7, u, 1.2); }, 0.03, 1e-3);
    const auto U0 = s.U;
    const auto next = ns_step(s, space, bc);
    for (int k = 0; k < 3; ++k)
      for (std::size_t i = 0; i < U0[k].size(); ++i) EXPECT_NEAR(next.U[k][i], U0[k][i], 1e-13);
  }
}
