#pragma once

#include <array>

#include <Eigen/Core>

#include "jmm/types.hpp"

namespace jmm {

/// Value, gradient and Hessian of an interpolant at a point.
struct Jet2 {
  double T = 0;
  Vec2 grad{0, 0};
  Mat2 hess = Mat2::Zero();
};

/// Corner data of one cell, corners ordered (0,0), (1,0), (0,1), (1,1) in local (u, v).
struct CellCornerData {
  std::array<double, 4> T{};
  std::array<Vec2, 4> grad{};
  std::array<double, 4> Txy{};
};

/// Bicubic Hermite interpolant sum a(m, n) u^m v^n on one square cell, with
/// u = (x - origin.x) / h and v = (y - origin.y) / h.
class BicubicCell {
 public:
  BicubicCell() = default;
  BicubicCell(const Vec2& origin, double h, const CellCornerData& data);

  const Eigen::Matrix4d& coeffs() const { return a_; }
  const Vec2& origin() const { return origin_; }
  double h() const { return h_; }
  bool valid() const { return valid_; }
  void set_valid(bool v) { valid_ = v; }

  bool contains(const Vec2& x, double tol = 1e-12) const;

  /// Evaluation at physical x; no containment check, so small extrapolation is allowed.
  Jet2 eval_unchecked(const Vec2& x) const;

 private:
  Eigen::Matrix4d a_ = Eigen::Matrix4d::Zero();
  Vec2 origin_{0, 0};
  double h_ = 1;
  bool valid_ = false;
};

/// Throws InvalidInput if x lies outside the cell.
Jet2 eval_cell(const BicubicCell& cell, const Vec2& x);

}  // namespace jmm
