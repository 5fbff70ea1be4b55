#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "hykin/errors.hpp"

namespace hykin {

/// Gauss-Legendre rule with K+1 points on the reference element (-1/2, 1/2).
/// Nodes are returned in increasing order; weights sum to 1.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int K) {
  if (K < 0) throw ParameterError("Gauss-Legendre order must be non-negative");
  const int n = K + 1;
  std::vector<double> nodes(n), weights(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton on P_n starting from the Chebyshev-like guess; roots come out descending.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double p = (n == 1) ? x : p1;
      const double pm1 = (n == 1) ? 1.0 : p0;
      dp = n * (x * p - pm1) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[n - 1 - i] = 0.5 * x;
    nodes[i] = -0.5 * x;
    weights[i] = weights[n - 1 - i] = 0.5 * w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
  return {std::move(nodes), std::move(weights)};
}

/// Lagrange basis through the K+1 Gauss points of (-1/2, 1/2), with the
/// tables the nodal DG schemes need.
class NodalBasis {
 public:
  NodalBasis() : NodalBasis(0) {}

  explicit NodalBasis(int K) : order_(K) {
    std::tie(nodes_, weights_) = gauss_legendre(K);
    const int n = K + 1;
    bary_.assign(n, 1.0);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        if (l != k) bary_[k] /= (nodes_[k] - nodes_[l]);

    diff_.assign(n * n, 0.0);
    for (int k = 0; k < n; ++k) {
      double diag = 0.0;
      for (int l = 0; l < n; ++l) {
        if (l == k) continue;
        const double d = (bary_[l] / bary_[k]) / (nodes_[k] - nodes_[l]);
        diff_[k * n + l] = d;
        diag -= d;
      }
      diff_[k * n + k] = diag;
    }

    left_.resize(n);
    right_.resize(n);
    for (int k = 0; k < n; ++k) {
      left_[k] = value(k, -0.5);
      right_[k] = value(k, 0.5);
    }

    // stiffness_[k*n+l] = w_l * phi_k'(x_l) / w_k : volume term of the
    // weak form divided by the diagonal mass.
    stiffness_.assign(n * n, 0.0);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        stiffness_[k * n + l] = weights_[l] * diff_[l * n + k] / weights_[k];
    lift_left_.resize(n);
    lift_right_.resize(n);
    for (int k = 0; k < n; ++k) {
      lift_left_[k] = left_[k] / weights_[k];
      lift_right_[k] = right_[k] / weights_[k];
    }
  }

  int order() const { return order_; }
  int size() const { return order_ + 1; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  /// D[k][l] = d phi_l / d xi at node k (reference coordinates), row-major.
  const std::vector<double>& diff_matrix() const { return diff_; }
  double diff(int k, int l) const { return diff_[k * size() + l]; }

  /// phi_k(-1/2) and phi_k(+1/2).
  const std::vector<double>& left_trace() const { return left_; }
  const std::vector<double>& right_trace() const { return right_; }

  const std::vector<double>& stiffness() const { return stiffness_; }
  const std::vector<double>& lift_left() const { return lift_left_; }
  const std::vector<double>& lift_right() const { return lift_right_; }

  /// phi_k(xi) for any xi.
  double value(int k, double xi) const {
    double p = 1.0;
    for (int l = 0; l < size(); ++l)
      if (l != k) p *= (xi - nodes_[l]) / (nodes_[k] - nodes_[l]);
    return p;
  }

  /// phi_k'(xi) for any xi (reference coordinates).
  double derivative(int k, double xi) const {
    double sum = 0.0;
    for (int m = 0; m < size(); ++m) {
      if (m == k) continue;
      double p = 1.0 / (nodes_[k] - nodes_[m]);
      for (int l = 0; l < size(); ++l)
        if (l != k && l != m) p *= (xi - nodes_[l]) / (nodes_[k] - nodes_[l]);
      sum += p;
    }
    return sum;
  }

 private:
  int order_;
  std::vector<double> nodes_, weights_, bary_, diff_, left_, right_;
  std::vector<double> stiffness_, lift_left_, lift_right_;
};

/// Differentiation matrix of the basis (row k: derivative at node k).
inline std::vector<double> lagrange_diff_matrix(const NodalBasis& basis) { return basis.diff_matrix(); }

}  // namespace hykin
