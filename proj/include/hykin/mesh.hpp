#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "hykin/errors.hpp"

namespace hykin {

/// One axis of a tensor-product mesh, given by strictly increasing edges.
class Axis {
 public:
  Axis() = default;

  explicit Axis(std::vector<double> edges) : edges_(std::move(edges)) {
    if (edges_.size() < 2) throw ConfigurationError("axis needs at least one cell");
    for (std::size_t i = 1; i < edges_.size(); ++i) {
      if (!(edges_[i] > edges_[i - 1])) {
        throw ConfigurationError("axis edges must be strictly increasing (edge " +
                                 std::to_string(i) + ")");
      }
    }
    double sum = 0.0;
    for (int i = 0; i < size(); ++i) sum += width(i);
    const double extent = upper() - lower();
    if (std::abs(sum - extent) > 1e-12 * extent) {
      throw ConfigurationError("axis widths do not sum to the domain extent");
    }
  }

  static Axis uniform(double lo, double hi, int n) {
    if (n < 1 || !(hi > lo)) throw ConfigurationError("invalid uniform axis");
    std::vector<double> e(n + 1);
    for (int i = 0; i <= n; ++i) e[i] = lo + (hi - lo) * i / n;
    e[n] = hi;
    return Axis(std::move(e));
  }

  int size() const { return static_cast<int>(edges_.size()) - 1; }
  double edge(int i) const { return edges_[i]; }
  double width(int i) const { return edges_[i + 1] - edges_[i]; }
  double center(int i) const { return 0.5 * (edges_[i] + edges_[i + 1]); }
  double lower() const { return edges_.front(); }
  double upper() const { return edges_.back(); }
  double length() const { return upper() - lower(); }
  const std::vector<double>& edges() const { return edges_; }

  double min_width() const {
    double h = width(0);
    for (int i = 1; i < size(); ++i) h = std::min(h, width(i));
    return h;
  }
  double max_width() const {
    double h = width(0);
    for (int i = 1; i < size(); ++i) h = std::max(h, width(i));
    return h;
  }

 private:
  std::vector<double> edges_;
};

/// Tensor-product mesh in Dim = 1 or 2 space dimensions.
/// Cells are numbered with axis 0 fastest: cell = i + nx * j.
template <int Dim>
class Mesh {
  static_assert(Dim == 1 || Dim == 2, "only 1D and 2D meshes are supported");

 public:
  Mesh() = default;
  explicit Mesh(std::array<Axis, Dim> axes) : axes_(std::move(axes)) {}

  const Axis& axis(int d) const { return axes_[d]; }
  int cells_along(int d) const { return axes_[d].size(); }

  int size() const {
    int n = 1;
    for (const auto& a : axes_) n *= a.size();
    return n;
  }

  std::array<int, Dim> cell_index(int c) const {
    std::array<int, Dim> idx{};
    idx[0] = c % axes_[0].size();
    if constexpr (Dim == 2) idx[1] = c / axes_[0].size();
    return idx;
  }

  int cell(const std::array<int, Dim>& idx) const {
    if constexpr (Dim == 1) {
      return idx[0];
    } else {
      return idx[0] + axes_[0].size() * idx[1];
    }
  }

  double width(int c, int d) const { return axes_[d].width(cell_index(c)[d]); }

  double volume(int c) const {
    double v = 1.0;
    const auto idx = cell_index(c);
    for (int d = 0; d < Dim; ++d) v *= axes_[d].width(idx[d]);
    return v;
  }

  std::array<double, Dim> center(int c) const {
    std::array<double, Dim> x{};
    const auto idx = cell_index(c);
    for (int d = 0; d < Dim; ++d) x[d] = axes_[d].center(idx[d]);
    return x;
  }

  double domain_volume() const {
    double v = 1.0;
    for (const auto& a : axes_) v *= a.length();
    return v;
  }

 private:
  std::array<Axis, Dim> axes_;
};

}  // namespace hykin
