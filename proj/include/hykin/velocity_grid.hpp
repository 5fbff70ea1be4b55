#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "hykin/errors.hpp"

namespace hykin {

/// Number of conserved variables (rho, rho u, E) in Dim space dimensions.
template <int Dim>
inline constexpr int kConserved = Dim + 2;

template <int Dim>
using Conserved = std::array<double, kConserved<Dim>>;

/// Uniform mid-point velocity lattice on [-V_c, V_c]^Dim.
/// Velocity nodes are numbered with axis 0 fastest.
template <int Dim>
class VelocityGrid {
 public:
  VelocityGrid() : VelocityGrid(8.0, 32) {}

  VelocityGrid(double vcut, int n) : vcut_(vcut), n_(n) {
    if (!(vcut > 0.0) || n < 2) throw ParameterError("velocity grid needs V_c > 0 and N_v >= 2");
    const double dv = 2.0 * vcut / n;
    nodes_.resize(n);
    for (int j = 0; j < n; ++j) nodes_[j] = -vcut + (j + 0.5) * dv;
    weight_ = std::pow(dv, Dim);
    size_ = 1;
    for (int d = 0; d < Dim; ++d) size_ *= n;
    for (int d = 0; d < Dim; ++d) {
      components_[d].resize(size_);
      for (int j = 0; j < size_; ++j) components_[d][j] = nodes_[axis_index(j, d)];
    }
    speed2_.resize(size_);
    for (int j = 0; j < size_; ++j) {
      double s = 0.0;
      for (int d = 0; d < Dim; ++d) s += components_[d][j] * components_[d][j];
      speed2_[j] = s;
    }
  }

  double vcut() const { return vcut_; }
  int points_per_axis() const { return n_; }
  int size() const { return size_; }
  double spacing() const { return 2.0 * vcut_ / n_; }
  /// Mid-point quadrature weight (dv^Dim), identical for every node.
  double weight() const { return weight_; }
  const std::vector<double>& axis_nodes() const { return nodes_; }

  int axis_index(int j, int d) const { return d == 0 ? j % n_ : j / n_; }

  double component(int j, int d) const { return components_[d][j]; }
  const std::vector<double>& components(int d) const { return components_[d]; }
  /// |v_j|^2
  double speed2(int j) const { return speed2_[j]; }

  std::array<double, Dim> velocity(int j) const {
    std::array<double, Dim> v{};
    for (int d = 0; d < Dim; ++d) v[d] = components_[d][j];
    return v;
  }

 private:
  double vcut_;
  int n_;
  int size_ = 0;
  double weight_ = 0.0;
  std::vector<double> nodes_;
  std::array<std::vector<double>, Dim> components_;
  std::vector<double> speed2_;
};

/// Pointwise macroscopic moments of a distribution.
template <int Dim>
struct Moments {
  double rho = 1.0;
  std::array<double, Dim> u{};
  double T = 1.0;

  double pressure() const { return rho * T; }
  double speed2() const {
    double s = 0.0;
    for (double c : u) s += c * c;
    return s;
  }
  double energy() const { return 0.5 * rho * speed2() + 1.5 * rho * T; }

  bool valid() const { return rho > 0.0 && T > 0.0 && std::isfinite(rho) && std::isfinite(T); }

  Conserved<Dim> conserved() const {
    Conserved<Dim> U{};
    U[0] = rho;
    for (int d = 0; d < Dim; ++d) U[1 + d] = rho * u[d];
    U[Dim + 1] = energy();
    return U;
  }

  static Moments from_conserved(const Conserved<Dim>& U) {
    Moments m;
    m.rho = U[0];
    double ke = 0.0;
    for (int d = 0; d < Dim; ++d) {
      m.u[d] = U[1 + d] / U[0];
      ke += m.u[d] * U[1 + d];
    }
    m.T = (U[Dim + 1] - 0.5 * ke) / (1.5 * U[0]);
    return m;
  }
};

template <int Dim>
void require_valid(const Moments<Dim>& m, const char* where) {
  if (!m.valid()) {
    throw InvalidState(std::string(where) + ": invalid state (rho=" + std::to_string(m.rho) +
                       ", T=" + std::to_string(m.T) + ")");
  }
}

/// BGK collision frequency nu = 2 rho / sqrt(pi).
template <int Dim>
double collision_frequency(const Moments<Dim>& m) {
  if (!(m.rho > 0.0)) throw InvalidState("collision frequency: nonpositive density");
  return 2.0 * m.rho / std::sqrt(std::numbers::pi);
}

struct TransportCoefficients {
  double mu;
  double kappa;
};

/// Viscosity and heat conductivity of the BGK model; beta shifts the
/// Prandtl number to 1/(1-beta).
template <int Dim>
TransportCoefficients transport_coefficients(const Moments<Dim>& m, double beta = 0.0) {
  if (!(beta < 1.0)) throw ParameterError("Prandtl parameter beta must be < 1");
  require_valid(m, "transport coefficients");
  const double nu = collision_frequency(m);
  return {m.rho * m.T / ((1.0 - beta) * nu), 2.5 * m.rho * m.T / nu};
}

/// Knudsen number plus Prandtl parameter (beta = 0 for BGK).
struct FluidCoefficients {
  double epsilon = 1e-2;
  double beta = 0.0;

  double prandtl() const { return 1.0 / (1.0 - beta); }
};

}  // namespace hykin
