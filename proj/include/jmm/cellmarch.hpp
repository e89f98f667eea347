#pragma once

#include <array>
#include <optional>
#include <vector>

#include "jmm/bicubic.hpp"
#include "jmm/grid.hpp"
#include "jmm/jet.hpp"

namespace jmm {

/// T_xy at the four corners of a cell from corner gradients.
///
/// Central differences of T_y (resp. T_x) along the x-oriented (resp.
/// y-oriented) edges give T_xy at the edge midpoints; a bilinear field is then
/// evaluated at the corners. The midpoints are collinear with respect to the
/// twist term (u - 1/2)(v - 1/2), which vanishes on all four of them, so that
/// coefficient is set to zero and the constant term is the mean of the four
/// midpoint values.
std::array<double, 4> estimate_txy(const std::array<Vec2, 4>& corner_grads, double h);

struct SecondPartials {
  double Txx = 0, Txy = 0, Tyy = 0;
};

/// Cell-based partial 1-jet marching: nodal T_xy twist store plus one bicubic
/// per grid cell.
///
/// Nodes marked exact (the initialization region) keep their analytic T_xy.
/// Every other node's T_xy is the running mean of the estimates from the valid
/// cells incident on it.
class CellStore {
 public:
  explicit CellStore(const Grid2& grid);

  const Grid2& grid() const { return grid_; }

  void set_exact_txy(int node, double txy);
  bool txy_fixed(int node) const { return fixed_[node] != 0; }
  double txy(int node) const { return txy_[node]; }
  int twist_count(int node) const { return count_[node]; }

  const BicubicCell& cell(CellIndex c) const { return cells_[grid_.flat(c)]; }
  const BicubicCell* valid_cell(CellIndex c) const {
    const auto& cell = cells_[grid_.flat(c)];
    return cell.valid() ? &cell : nullptr;
  }

  /// Builds the bicubic for c from current nodal data and marks it valid.
  void build_exact_cell(CellIndex c, const JetView& jets);

  /// Called once all corners of c are valid: adds c's twist estimates to the
  /// running means of its non-exact corners, then rebuilds c and every valid
  /// cell sharing one of its corners. Calling it again for the same cell only
  /// rebuilds.
  void finalize_cell(CellIndex c, const JetView& jets);

  /// Finalizes every cell incident on n whose corners are all valid.
  void on_node_valid(NodeIndex n, const JetView& jets);

  /// Hessian at node n averaged over the currently valid incident cells.
  std::optional<Mat2> nodal_hessian(NodeIndex n) const;

  /// Rebuilds every valid cell from the final nodal data.
  void rebuild_all(const JetView& jets);

  /// Nodal (T_xx, T_xy, T_yy) averaged over all valid incident cells.
  std::vector<SecondPartials> nodal_second_partials() const;

 private:
  void rebuild(CellIndex c, const JetView& jets);
  CellCornerData corner_data(CellIndex c, const JetView& jets) const;

  const Grid2& grid_;
  std::vector<BicubicCell> cells_;
  std::vector<char> contributed_;
  std::vector<double> txy_;
  std::vector<double> txy_sum_;
  std::vector<int> count_;
  std::vector<char> fixed_;
};

}  // namespace jmm
