#include "jmm/baseline.hpp"

#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

namespace jmm {

std::optional<BaselineUpdate> fmm_update(const Grid2& grid, const JetView& jets,
                                         const SlownessModel& model, NodeIndex xhat) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  // Smallest valid neighbor value along each axis and the side it lies on.
  double best[2] = {inf, inf};
  double side[2] = {0, 0};
  for (int axis = 0; axis < 2; ++axis) {
    for (int sgn : {-1, 1}) {
      NodeIndex m = xhat;
      (axis == 0 ? m.i : m.j) += sgn;
      if (!grid.contains(m)) continue;
      const int im = grid.flat(m);
      if (jets.valid(im) && jets.T[im] < best[axis]) {
        best[axis] = jets.T[im];
        side[axis] = -sgn;  // T grows away from the upwind neighbor
      }
    }
  }
  const bool has_a = std::isfinite(best[0]), has_b = std::isfinite(best[1]);
  if (!has_a && !has_b) return std::nullopt;

  const double hs = grid.h() * model.s(grid.point(xhat));
  BaselineUpdate out;
  if (has_a && has_b && std::abs(best[0] - best[1]) < hs) {
    const double a = best[0], b = best[1];
    out.T = 0.5 * (a + b + std::sqrt(2 * hs * hs - (a - b) * (a - b)));
    out.grad = {side[0] * (out.T - a) / grid.h(), side[1] * (out.T - b) / grid.h()};
    return out;
  }
  const int axis = (!has_b || (has_a && best[0] <= best[1])) ? 0 : 1;
  out.T = best[axis] + hs;
  out.grad = Vec2::Zero();
  out.grad(axis) = side[axis] * hs / grid.h();
  return out;
}

std::pair<double, double> mp0_triangle(const Vec2& xhat, const Vec2& x1, const Vec2& x2, double T1,
                                       double T2, const SlownessModel& model) {
  auto f = [&](double lam) {
    const Vec2 xl = (1 - lam) * x1 + lam * x2;
    return (1 - lam) * T1 + lam * T2 + model.s(0.5 * (xl + xhat)) * (xhat - xl).norm();
  };
  const auto [lam, val] =
      boost::math::tools::brent_find_minima(f, 0.0, 1.0, std::numeric_limits<double>::digits / 2);
  double best_val = val, best_lam = lam;
  for (double end : {0.0, 1.0}) {
    const double fe = f(end);
    if (fe < best_val) best_val = fe, best_lam = end;
  }
  return {best_val, best_lam};
}

std::optional<BaselineUpdate> olim8_mp0_update(const Grid2& grid, const JetView& jets,
                                               const SlownessModel& model, NodeIndex xhat) {
  const Vec2 xh = grid.point(xhat);
  std::optional<BaselineUpdate> best;
  Vec2 best_dir{0, 0};
  auto consider = [&](double value, const Vec2& xl) {
    if (!best || value < best->T) {
      best = BaselineUpdate{value, {0, 0}};
      best_dir = (xh - xl).normalized();
    }
  };
  for (const auto& m : grid.neighbors8(xhat)) {
    const int im = grid.flat(m);
    if (!jets.valid(im)) continue;
    const Vec2 x1 = grid.point(m);
    consider(jets.T[im] + model.s(0.5 * (x1 + xh)) * (xh - x1).norm(), x1);
  }
  if (!best) return best;
  for (const auto& [a, b] : grid.update_triangles(xhat, Stencil::eight)) {
    const int ia = grid.flat(a), ib = grid.flat(b);
    if (!jets.valid(ia) || !jets.valid(ib)) continue;
    const Vec2 x1 = grid.point(a), x2 = grid.point(b);
    const auto [value, lam] = mp0_triangle(xh, x1, x2, jets.T[ia], jets.T[ib], model);
    consider(value, (1 - lam) * x1 + lam * x2);
  }
  best->grad = model.s(xh) * best_dir;
  return best;
}

}  // namespace jmm
