#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "hykin/dg_space.hpp"
#include "hykin/errors.hpp"

namespace hykin {

/// Wall emitting saturated vapour at rest: incoming density p_w / T_w.
struct EvaporatingWall {
  double T;
  double p;
};

/// Diffusely reflecting wall with a temperature profile along the wall
/// (argument: tangential coordinate; ignored in 1D) and a wall velocity.
struct DiffuseMovingWall {
  std::function<double(double)> T;
  std::array<double, 2> u{};
};

struct Outflow {};
struct Periodic {};

using BoundaryKind = std::variant<EvaporatingWall, DiffuseMovingWall, Outflow, Periodic>;

inline bool is_wall(const BoundaryKind& b) {
  return std::holds_alternative<EvaporatingWall>(b) || std::holds_alternative<DiffuseMovingWall>(b);
}

/// Boundary kinds per axis and side (0 = lower, 1 = upper).
template <int Dim>
struct BoundarySpec {
  std::array<std::array<BoundaryKind, 2>, Dim> side;

  BoundarySpec() {
    for (auto& s : side) s = {Outflow{}, Outflow{}};
  }

  static BoundarySpec all(const BoundaryKind& kind) {
    BoundarySpec b;
    for (auto& s : b.side) s = {kind, kind};
    return b;
  }

  bool periodic(int d) const { return std::holds_alternative<Periodic>(side[d][0]); }

  void validate() const {
    for (int d = 0; d < Dim; ++d) {
      if (std::holds_alternative<Periodic>(side[d][0]) != std::holds_alternative<Periodic>(side[d][1]))
        throw ConfigurationError("periodic boundaries must be paired on axis " + std::to_string(d));
      for (const auto& b : side[d]) {
        if (const auto* w = std::get_if<EvaporatingWall>(&b)) {
          if (!(w->T > 0.0) || !(w->p > 0.0)) throw ConfigurationError("evaporating wall needs T_w > 0 and p_w > 0");
        } else if (const auto* w = std::get_if<DiffuseMovingWall>(&b)) {
          if (!w->T) throw ConfigurationError("diffuse wall needs a temperature profile");
          if (w->u[d] != 0.0) throw ConfigurationError("diffuse wall velocity must be tangential");
        }
      }
    }
  }
};

/// One face of the mesh. minus/plus are the adjacent cells (-1 at a
/// non-periodic boundary); side is the boundary side (0 lower, 1 upper) or -1.
struct Face {
  int axis;
  int minus;
  int plus;
  int side;

  bool boundary() const { return side >= 0; }
  int interior() const { return minus >= 0 ? minus : plus; }
};

/// All faces of a tensor mesh, periodic pairs joined into interior faces.
template <int Dim>
class FaceTopology {
 public:
  FaceTopology() = default;

  FaceTopology(const Mesh<Dim>& mesh, const BoundarySpec<Dim>& bc) {
    bc.validate();
    cell_faces_.assign(mesh.size(), {});
    for (int d = 0; d < Dim; ++d) {
      const int n = mesh.cells_along(d);
      const int ntrans = Dim == 1 ? 1 : mesh.cells_along(1 - d);
      const bool periodic = bc.periodic(d);
      for (int jt = 0; jt < ntrans; ++jt) {
        auto cell_at = [&](int i) {
          std::array<int, Dim> idx{};
          idx[d] = i;
          if constexpr (Dim == 2) idx[1 - d] = jt;
          return mesh.cell(idx);
        };
        for (int i = 0; i <= n; ++i) {
          Face f{d, -1, -1, -1};
          if (i == 0) {
            if (periodic) continue;
            f.plus = cell_at(0);
            f.side = 0;
          } else if (i == n) {
            f.minus = cell_at(n - 1);
            if (periodic) {
              f.plus = cell_at(0);
            } else {
              f.side = 1;
            }
          } else {
            f.minus = cell_at(i - 1);
            f.plus = cell_at(i);
          }
          const int id = static_cast<int>(faces_.size());
          faces_.push_back(f);
          if (f.minus >= 0) cell_faces_[f.minus][d][1] = id;
          if (f.plus >= 0) cell_faces_[f.plus][d][0] = id;
        }
      }
    }
  }

  const std::vector<Face>& faces() const { return faces_; }
  int size() const { return static_cast<int>(faces_.size()); }
  const Face& operator[](int i) const { return faces_[i]; }

  /// Face index on side s of cell c along axis d.
  int face_of(int c, int d, int s) const { return cell_faces_[c][d][s]; }

  /// Neighbour across side s along axis d, or -1 at a non-periodic boundary.
  int neighbor(int c, int d, int s) const {
    const Face& f = faces_[face_of(c, d, s)];
    return s == 0 ? f.minus : f.plus;
  }

 private:
  std::vector<Face> faces_;
  std::vector<std::array<std::array<int, 2>, Dim>> cell_faces_;
};

/// Tangential coordinate of face node t on a face of cell c normal to axis d.
template <int Dim>
double tangential_coordinate(const DgSpace<Dim>& space, int c, int d, int side, int t) {
  if constexpr (Dim == 1) {
    (void)space;
    (void)c;
    (void)d;
    (void)side;
    (void)t;
    return 0.0;
  } else {
    return space.face_position(c, d, side, t)[1 - d];
  }
}

/// Cells whose centre lies within `band` of a wall boundary.
template <int Dim>
std::vector<char> wall_band_cells(const Mesh<Dim>& mesh, const BoundarySpec<Dim>& bc, double band) {
  std::vector<char> forced(mesh.size(), 0);
  if (!(band > 0.0)) return forced;
  for (int c = 0; c < mesh.size(); ++c) {
    const auto x = mesh.center(c);
    for (int d = 0; d < Dim; ++d) {
      if (is_wall(bc.side[d][0]) && x[d] - mesh.axis(d).lower() < band) forced[c] = 1;
      if (is_wall(bc.side[d][1]) && mesh.axis(d).upper() - x[d] < band) forced[c] = 1;
    }
  }
  return forced;
}

}  // namespace hykin
