#pragma once

#include <cmath>

#include <Eigen/Core>

namespace jmm {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Counterclockwise rotation by pi/2.
inline Vec2 rot90(const Vec2& a) { return {-a.y(), a.x()}; }

inline Vec2 unit_from_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }

}  // namespace jmm
