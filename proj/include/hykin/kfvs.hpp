#pragma once

#include <array>
#include <cmath>

#include "hykin/half_moments.hpp"
#include "hykin/reduced.hpp"
#include "hykin/velocity_grid.hpp"

namespace hykin {

/// Euler (advection) flux of a state along axis d.
template <int Dim>
Conserved<Dim> euler_flux(const Moments<Dim>& m, int d) {
  Conserved<Dim> F{};
  const double p = m.pressure();
  F[0] = m.rho * m.u[d];
  for (int a = 0; a < Dim; ++a) F[1 + a] = m.rho * m.u[a] * m.u[d] + (a == d ? p : 0.0);
  F[Dim + 1] = m.u[d] * (m.energy() + p);
  return F;
}

/// Deformation tensor D(u) = grad u + grad u^T - (2/3) div u I of a gas with
/// three translational degrees of freedom, restricted to the Dim resolved axes.
template <int Dim>
std::array<std::array<double, Dim>, Dim> deformation_tensor(const PrimitiveGradients<Dim>& g) {
  double div = 0.0;
  for (int a = 0; a < Dim; ++a) div += g.du[a][a];
  std::array<std::array<double, Dim>, Dim> D{};
  for (int a = 0; a < Dim; ++a)
    for (int b = 0; b < Dim; ++b) D[a][b] = g.du[a][b] + g.du[b][a] - (a == b ? 2.0 / 3.0 * div : 0.0);
  return D;
}

/// Diffusive flux F^d along axis d: (0, mu D(u)_{.d}, mu (D(u) u)_d + kappa dT/dx_d).
/// The physical flux is F^a - eps F^d.
template <int Dim>
Conserved<Dim> viscous_volume_flux(const Moments<Dim>& m, const PrimitiveGradients<Dim>& g, int d,
                                   double beta = 0.0) {
  const TransportCoefficients tc = transport_coefficients(m, beta);
  const auto D = deformation_tensor(g);
  Conserved<Dim> F{};
  double work = 0.0;
  for (int a = 0; a < Dim; ++a) {
    F[1 + a] = tc.mu * D[a][d];
    work += F[1 + a] * m.u[a];
  }
  F[Dim + 1] = work + tc.kappa * g.dT[d];
  return F;
}

/// Total nodal flux F^a - eps F^d along axis d.
template <int Dim>
Conserved<Dim> navier_stokes_flux(const Moments<Dim>& m, const PrimitiveGradients<Dim>& g, double epsilon, int d) {
  Conserved<Dim> F = euler_flux(m, d);
  if (epsilon != 0.0) {
    const Conserved<Dim> Fd = viscous_volume_flux(m, g, d);
    for (int k = 0; k < kConserved<Dim>; ++k) F[k] -= epsilon * Fd[k];
  }
  return F;
}

/// Closed-form flux of a Chapman-Enskog pair through a face normal to
/// axis d, restricted to one half of the normal velocity line:
/// int_{half} v_d (Phi first + e_E second) dv.
template <int Dim>
Conserved<Dim> half_flux(const ChapmanEnskogPair<Dim>& pair, int d, HalfLine side) {
  const Moments<Dim>& m = pair.moments();
  const SplitGaussianTable S(m.rho, m.u[d], m.T, side);
  const auto& p1 = pair.first_poly();
  const auto& p2 = pair.second_poly();
  Conserved<Dim> F{};
  if constexpr (Dim == 1) {
    for (int k = 0; k < 4; ++k) {
      const double c1 = p1.at(k), c2 = p2.at(k);
      F[0] += c1 * S(1, k);
      F[1] += c1 * S(2, k);
      F[2] += 0.5 * c1 * S(3, k) + c2 * S(1, k);
    }
  } else {
    const int t = 1 - d;
    const double ut = m.u[t];
    const double st = pair.sqrt_temperature();
    for (int mn = 0; mn < 4; ++mn)
      for (int q = 0; q < 4; ++q) {
        const int i0 = d == 0 ? mn : q, i1 = d == 0 ? q : mn;
        const double c1 = p1.at(i0, i1), c2 = p2.at(i0, i1);
        if (c1 == 0.0 && c2 == 0.0) continue;
        const double G0 = gaussian_moment(q), G1 = gaussian_moment(q + 1), G2 = gaussian_moment(q + 2);
        const double vt1 = ut * G0 + st * G1;
        const double vt2 = ut * ut * G0 + 2.0 * ut * st * G1 + m.T * G2;
        F[0] += c1 * S(1, mn) * G0;
        F[1 + d] += c1 * S(2, mn) * G0;
        F[1 + t] += c1 * S(1, mn) * vt1;
        F[3] += c1 * (0.5 * S(3, mn) * G0 + 0.5 * S(1, mn) * vt2) + c2 * S(1, mn) * G0;
      }
  }
  return F;
}

/// Kinetic flux-vector splitting: upper half of the left truncated pair plus
/// lower half of the right truncated pair.
template <int Dim>
Conserved<Dim> kfvs_flux(const ChapmanEnskogPair<Dim>& left, const ChapmanEnskogPair<Dim>& right, int d) {
  const Conserved<Dim> a = half_flux(left, d, HalfLine::Upper);
  const Conserved<Dim> b = half_flux(right, d, HalfLine::Lower);
  Conserved<Dim> F{};
  for (int k = 0; k < kConserved<Dim>; ++k) F[k] = a[k] + b[k];
  return F;
}

inline Conserved<1> kfvs_interface_flux_1d(const Moments<1>& mL, const PrimitiveGradients<1>& dL,
                                           const Moments<1>& mR, const PrimitiveGradients<1>& dR,
                                           double epsilon) {
  return kfvs_flux(ChapmanEnskogPair<1>(mL, dL, epsilon), ChapmanEnskogPair<1>(mR, dR, epsilon), 0);
}

inline Conserved<2> kfvs_interface_flux_2d(const Moments<2>& mL, const PrimitiveGradients<2>& dL,
                                           const Moments<2>& mR, const PrimitiveGradients<2>& dR,
                                           double epsilon, int axis) {
  return kfvs_flux(ChapmanEnskogPair<2>(mL, dL, epsilon), ChapmanEnskogPair<2>(mR, dR, epsilon), axis);
}

}  // namespace hykin
