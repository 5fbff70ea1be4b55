#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "hykin/errors.hpp"
#include "hykin/velocity_grid.hpp"

namespace hykin {

/// I_n(s) = int_s^inf z^n exp(-z^2) dz for n = 0..6.
inline double half_moment(int n, double s) {
  constexpr double kHalfSqrtPi = 0.5 * 1.7724538509055160273;  // sqrt(pi)/2
  const double e = std::exp(-s * s);
  const double s2 = s * s;
  switch (n) {
    case 0:
      return kHalfSqrtPi * std::erfc(s);
    case 1:
      return 0.5 * e;
    case 2:
      return 0.5 * (s * e + kHalfSqrtPi * std::erfc(s));
    case 3:
      return 0.5 * (1.0 + s2) * e;
    case 4:
      return 0.5 * ((s2 + 1.5) * s * e + 1.5 * kHalfSqrtPi * std::erfc(s));
    case 5:
      return (1.0 + s2 + 0.5 * s2 * s2) * e;
    case 6:
      return 0.5 * ((s2 * s2 + 2.5 * s2 + 3.75) * s * e + 3.75 * kHalfSqrtPi * std::erfc(s));
    default:
      throw ParameterError("half_moment: order must be in [0, 6]");
  }
}

/// Which half of the velocity line an integral runs over.
enum class HalfLine { Upper, Lower };

/// Table S[n][m] = rho/sqrt(2 pi T) int_{half} v^n V^m exp(-V^2/2) dv,
/// V = (v-u)/sqrt(T), for 0 <= n, m <= 3. Upper means v >= 0.
class SplitGaussianTable {
 public:
  SplitGaussianTable(double rho, double u, double T, HalfLine side) {
    if (!(rho > 0.0) || !(T > 0.0)) throw InvalidState("split Gaussian moment: invalid state");
    const double a = std::sqrt(2.0 * T);
    const double c = std::numbers::sqrt2;
    const double sign = side == HalfLine::Upper ? 1.0 : -1.0;
    const double s = -sign * u / a;
    std::array<double, 7> I{};
    for (int k = 0; k <= 6; ++k) I[k] = half_moment(k, s);
    // v = sign*a*z + u, V = sign*c*z after z -> -z reflection on the lower half.
    const double sa = sign * a, sc = sign * c;
    const double pref = rho / std::sqrt(std::numbers::pi);
    constexpr int binom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
    for (int n = 0; n < 4; ++n)
      for (int m = 0; m < 4; ++m) {
        double sum = 0.0;
        for (int k = 0; k <= n; ++k)
          sum += binom[n][k] * std::pow(sa, k) * std::pow(u, n - k) * std::pow(sc, m) * I[k + m];
        table_[n][m] = pref * sum;
      }
  }

  double operator()(int n, int m) const { return table_[n][m]; }

 private:
  std::array<std::array<double, 4>, 4> table_{};
};

/// rho/sqrt(2 pi T) int_{half} v^n ((v-u)/sqrt T)^m exp(-(v-u)^2/(2T)) dv.
inline double split_gaussian_moment(int n, int m, double rho, double u, double T, HalfLine side) {
  if (n < 0 || n > 3 || m < 0 || m > 3) throw ParameterError("split_gaussian_moment: n, m must be in [0, 3]");
  return SplitGaussianTable(rho, u, T, side)(n, m);
}

/// E[Z^q] for a standard normal Z.
inline double gaussian_moment(int q) {
  constexpr std::array<double, 8> g{1.0, 0.0, 1.0, 0.0, 3.0, 0.0, 15.0, 0.0};
  return g[q];
}

}  // namespace hykin
