#pragma once

#include <optional>

#include "jmm/grid.hpp"
#include "jmm/jet.hpp"
#include "jmm/slowness.hpp"

namespace jmm {

/// First-order update result: value and a first-order gradient estimate.
struct BaselineUpdate {
  double T = 0;
  Vec2 grad{0, 0};
};

/// Sethian's upwind quadratic on the 4-point stencil. nullopt without a valid axis neighbor.
std::optional<BaselineUpdate> fmm_update(const Grid2& grid, const JetView& jets,
                                         const SlownessModel& model, NodeIndex xhat);

/// Midpoint-rule OLIM on the 8-point stencil with linear interpolation of T on
/// each triangle base; gradient s(xhat) ell' of the minimizing ray.
std::optional<BaselineUpdate> olim8_mp0_update(const Grid2& grid, const JetView& jets,
                                               const SlownessModel& model, NodeIndex xhat);

/// Minimizes (1 - lam) T1 + lam T2 + s((x_lam + xhat)/2) |xhat - x_lam| over lam in [0, 1].
/// Returns (value, lam).
std::pair<double, double> mp0_triangle(const Vec2& xhat, const Vec2& x1, const Vec2& x2, double T1,
                                       double T2, const SlownessModel& model);

}  // namespace jmm
