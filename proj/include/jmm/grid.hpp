#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "jmm/types.hpp"

namespace jmm {

struct NodeIndex {
  int i = 0;
  int j = 0;
  friend bool operator==(const NodeIndex&, const NodeIndex&) = default;
};

/// Cell (i, j) spans nodes (i, j), (i+1, j), (i, j+1), (i+1, j+1).
struct CellIndex {
  int i = 0;
  int j = 0;
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

enum class Stencil { four, eight };

/// Ring offsets of the 8-point stencil in counterclockwise order starting at (+1, 0).
inline constexpr std::array<std::array<int, 2>, 8> kRing8 = {{
    {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

/// Axis offsets of the 4-point stencil, counterclockwise from (+1, 0).
inline constexpr std::array<std::array<int, 2>, 4> kRing4 = {{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};

/// Node-centred square lattice with nodes on the domain boundary.
/// Per-node fields are stored flat with index i * M + j.
class Grid2 {
 public:
  Grid2(double xmin, double ymin, int M, double h);

  /// Grid covering [xmin, xmin + extent] x [ymin, ymin + extent] with M nodes per axis.
  static Grid2 square(double xmin, double ymin, double extent, int M);

  double xmin() const { return xmin_; }
  double ymin() const { return ymin_; }
  int size() const { return M_; }
  double h() const { return h_; }
  std::size_t num_nodes() const { return static_cast<std::size_t>(M_) * M_; }
  int num_cells_per_axis() const { return M_ - 1; }
  std::size_t num_cells() const { return static_cast<std::size_t>(M_ - 1) * (M_ - 1); }

  bool contains(NodeIndex n) const { return n.i >= 0 && n.j >= 0 && n.i < M_ && n.j < M_; }
  bool contains(CellIndex c) const {
    return c.i >= 0 && c.j >= 0 && c.i < M_ - 1 && c.j < M_ - 1;
  }

  int flat(NodeIndex n) const { return n.i * M_ + n.j; }
  NodeIndex node(int flat_index) const { return {flat_index / M_, flat_index % M_}; }
  int flat(CellIndex c) const { return c.i * (M_ - 1) + c.j; }
  CellIndex cell(int flat_index) const { return {flat_index / (M_ - 1), flat_index % (M_ - 1)}; }

  Vec2 point(NodeIndex n) const { return {xmin_ + n.i * h_, ymin_ + n.j * h_}; }
  Vec2 point(int flat_index) const { return point(node(flat_index)); }

  /// Nearest node to x (not clipped).
  NodeIndex nearest(const Vec2& x) const;

  std::vector<NodeIndex> neighbors8(NodeIndex n) const;
  std::vector<NodeIndex> neighbors4(NodeIndex n) const;
  std::vector<NodeIndex> neighbors(NodeIndex n, Stencil stencil) const {
    return stencil == Stencil::eight ? neighbors8(n) : neighbors4(n);
  }

  /// Bases (x1, x2) of the triangle updates for n: consecutive in-grid
  /// pairs of the counterclockwise ring.
  std::vector<std::pair<NodeIndex, NodeIndex>> update_triangles(NodeIndex n, Stencil stencil) const;

  /// Corner nodes of a cell ordered (0,0), (1,0), (0,1), (1,1).
  std::array<NodeIndex, 4> corners(CellIndex c) const {
    return {{{c.i, c.j}, {c.i + 1, c.j}, {c.i, c.j + 1}, {c.i + 1, c.j + 1}}};
  }

  /// In-grid cells incident on n (up to 4).
  std::vector<CellIndex> incident_cells(NodeIndex n) const;

 private:
  double xmin_;
  double ymin_;
  int M_;
  double h_;
};

}  // namespace jmm
