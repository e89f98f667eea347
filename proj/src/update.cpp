#include "jmm/update.hpp"

#include <cmath>

#include "jmm/errors.hpp"

namespace jmm {

std::string_view to_string(Solver solver) {
  switch (solver) {
    case Solver::jmm1: return "jmm1";
    case Solver::jmm1g: return "jmm1g";
    case Solver::jmm2: return "jmm2";
    case Solver::jmm2g: return "jmm2g";
    case Solver::jmm3: return "jmm3";
    case Solver::jmm3g: return "jmm3g";
    case Solver::jmm4: return "jmm4";
    case Solver::fmm: return "fmm";
    case Solver::olim8mp0: return "olim8mp0";
  }
  return "?";
}

Solver parse_solver(std::string_view key) {
  for (auto s : {Solver::jmm1, Solver::jmm1g, Solver::jmm2, Solver::jmm2g, Solver::jmm3,
                 Solver::jmm3g, Solver::jmm4, Solver::fmm, Solver::olim8mp0})
    if (to_string(s) == key) return s;
  if (key == "olim8_mp0") return Solver::olim8mp0;
  throw InvalidInput("unknown solver '" + std::string(key) + "'");
}

BaseInterp hermite_base(double lam, const BaseJet& base, const Vec2& x1, const Vec2& x2) {
  const Vec2 dx = x2 - x1;
  const double m1 = base.g1.dot(dx);
  const double m2 = base.g2.dot(dx);
  const double l = lam, l2 = l * l, l3 = l2 * l;
  BaseInterp out;
  out.T = (2 * l3 - 3 * l2 + 1) * base.T1 + (l3 - 2 * l2 + l) * m1 + (-2 * l3 + 3 * l2) * base.T2 +
          (l3 - l2) * m2;
  out.dT = (6 * l2 - 6 * l) * base.T1 + (3 * l2 - 4 * l + 1) * m1 + (-6 * l2 + 6 * l) * base.T2 +
           (3 * l2 - 2 * l) * m2;
  out.d2T = (12 * l - 6) * base.T1 + (6 * l - 4) * m1 + (-12 * l + 6) * base.T2 + (6 * l - 2) * m2;
  out.tangential = out.dT / dx.norm();
  return out;
}

std::optional<TangentAtBase> recover_normal_gradient(double lam, const BaseJet& base,
                                                     const UpdateGeometry& g,
                                                     const SlownessModel& model) {
  const BaseInterp bi = hermite_base(lam, base, g.x1, g.x2);
  const double len = g.dx.norm();
  const Vec2 e = g.dx / len;
  Vec2 v = rot90(e);
  if (v.dot(g.ell) < 0) v = -v;
  const double s = model.s(g.xlam);
  const double D = bi.tangential;
  const double disc = s * s - D * D;
  if (disc < 0) return std::nullopt;
  const double dv = std::sqrt(disc);
  const Vec2 grad = e * D + v * dv;
  const double ng = grad.norm();
  TangentAtBase out;
  out.t = grad / ng;
  const double dD = bi.d2T / len;
  const double ds = model.grad_s(g.xlam).dot(g.dx);
  const double ddv = dv > 0 ? (s * ds - D * dD) / dv : 0.0;
  const Vec2 dgrad = e * dD + v * ddv;
  out.dt = (dgrad - out.t * out.t.dot(dgrad)) / ng;
  return out;
}

namespace {

constexpr double kLamEps = 1e-12;

double angle_of(const Vec2& t) { return std::atan2(t.y(), t.x()); }

double initial_theta(const TriangleData& tri, const WarmStart& ws) {
  if (ws.theta_hat) return *ws.theta_hat;
  const Vec2 xlam = tri.x1 + ws.lam * (tri.x2 - tri.x1);
  return angle_of(tri.xhat - xlam);
}

NewtonOptions newton_options(const TriangleData& tri) {
  NewtonOptions opt;
  opt.step_scale = (tri.xhat - tri.x1).norm();
  return opt;
}

/// Runs the Newton solve; if it stops on a lam bound where the gradient
/// points into the interior, restarts once from the midpoint.
template <int N, class Fn>
NewtonResult<N> solve_with_kkt(Fn&& f, Eigen::Matrix<double, N, 1> x0, const NewtonOptions& opt) {
  auto r = minimize_newton<N>(f, x0, opt);
  const double lam = r.x(0);
  const bool inward = (lam <= 0 && r.grad(0) < -opt.grad_tol) || (lam >= 1 && r.grad(0) > opt.grad_tol);
  if (inward && r.converged) {
    x0(0) = 0.5;
    auto again = minimize_newton<N>(f, x0, opt);
    if (again.converged && again.value <= r.value) return again;
  }
  return r;
}

UpdateResult finish(const TriangleData& tri, const SlownessModel& model, double value, double lam,
                    const Vec2& t_lam, const Vec2& t_hat, bool converged, int iterations) {
  UpdateResult out;
  const UpdateGeometry g = UpdateGeometry::make(tri.xhat, tri.x1, tri.x2, lam);
  out.value = value;
  out.lam = lam;
  out.t_lam = t_lam;
  out.t_hat = t_hat.normalized();
  out.grad = model.s(tri.xhat) * out.t_hat;
  out.L = g.L;
  out.converged = converged;
  out.iterations = iterations;
  return out;
}

UpdateResult rejected_result() {
  UpdateResult out;
  out.rejected = true;
  return out;
}

}  // namespace

UpdateResult solve_jmm1(const TriangleData& tri, const SlownessModel& model, const WarmStart& ws) {
  using V = Eigen::Vector3d;
  auto f = [&](const V& x, V& grad) {
    const auto g = UpdateGeometry::make(tri.xhat, tri.x1, tri.x2, x(0));
    const auto bi = hermite_base(x(0), tri.base, tri.x1, tri.x2);
    const Vec2 tl = unit_from_angle(x(1)), th = unit_from_angle(x(2));
    const auto p = curve_cost_partials(g, bi.T, bi.dT, tl, th, model);
    grad << p.dlam, p.dt_lam.dot(rot90(tl)), p.dt_hat.dot(rot90(th));
    return p.F;
  };
  const double th0 = initial_theta(tri, ws);
  auto r = solve_with_kkt<3>(f, V(ws.lam, th0, th0), newton_options(tri));
  return finish(tri, model, r.value, r.x(0), unit_from_angle(r.x(1)), unit_from_angle(r.x(2)),
                r.converged, r.iterations);
}

UpdateResult solve_jmm1g(const TriangleData& tri, const SlownessModel& model, const WarmStart& ws) {
  using V = Eigen::Vector3d;
  auto f = [&](const V& x, V& grad) {
    const auto g = UpdateGeometry::make(tri.xhat, tri.x1, tri.x2, x(0));
    const auto bi = hermite_base(x(0), tri.base, tri.x1, tri.x2);
    const auto p = graph_cost_partials(g, bi.T, bi.dT, x(1), x(2), model);
    grad << p.dlam, p.db0, p.db1;
    return p.F;
  };
  auto r = solve_with_kkt<3>(f, V(ws.lam, 0, 0), newton_options(tri));
  const auto g = UpdateGeometry::make(tri.xhat, tri.x1, tri.x2, r.x(0));
  return finish(tri, model, r.value, r.x(0), (g.ell + r.x(1) * g.q).normalized(),
                g.ell + r.x(2) * g.q, r.converged, r.iterations);
}

namespace {

/// Shared by jmm2 and jmm4: t_lam supplied per lam by `tangent`.
template <class TangentFn>
UpdateResult solve_with_base_tangent(const TriangleData& tri, const SlownessModel& model,
                                     const WarmStart& ws, TangentFn&& tangent) {
  using V = Eigen::Vector2d;
  auto f = [&](const V& x, V& grad) {
    const auto g = UpdateGeometry::make(tri.xhat, tri.x1, tri.x2, x(0));
    const auto tl = tangent(x(0), g);
    if (!tl) {
      grad.setZero();
      return std::numeric_limits<double>::infinity();
    }
    const auto bi = hermite_base(x(0), tri.base, tri.x1, tri.x2);
    const Vec2 th = unit_from_angle(x(1));
    const auto p = curve_cost_partials(g, bi.T, bi.dT, tl->t, th, model);
    grad << p.dlam + p.dt_lam.dot(tl->dt), p.dt_hat.dot(rot90(th));
    return p.F;
  };
  auto r = solve_with_kkt<2>(f, V(ws.lam, initial_theta(tri, ws)), newton_options(tri));
  const auto g = UpdateGeometry::make(tri.xhat, tri.x1, tri.x2, r.x(0));
  const auto tl = tangent(r.x(0), g);
  if (!tl || !std::isfinite(r.value)) return rejected_result();
  return finish(tri, model, r.value, r.x(0), tl->t, unit_from_angle(r.x(1)), r.converged,
                r.iterations);
}

}  // namespace

UpdateResult solve_jmm2(const TriangleData& tri, const SlownessModel& model, const WarmStart& ws) {
  return solve_with_base_tangent(tri, model, ws, [&](double lam, const UpdateGeometry& g) {
    return recover_normal_gradient(lam, tri.base, g, model);
  });
}

UpdateResult solve_jmm4(const TriangleData& tri, const SlownessModel& model, const BicubicCell* cell,
                        const WarmStart& ws) {
  if (cell == nullptr || !cell->valid()) return solve_jmm2(tri, model, ws);
  return solve_with_base_tangent(
      tri, model, ws, [&](double, const UpdateGeometry& g) -> std::optional<TangentAtBase> {
        const Jet2 j = cell->eval_unchecked(g.xlam);
        const double ng = j.grad.norm();
        if (!(ng > 0)) return std::nullopt;
        TangentAtBase out;
        out.t = j.grad / ng;
        const Vec2 dgrad = j.hess * g.dx;
        out.dt = (dgrad - out.t * out.t.dot(dgrad)) / ng;
        return out;
      });
}

UpdateResult solve_jmm2g(const TriangleData& tri, const SlownessModel& model, const WarmStart& ws) {
  using V = Eigen::Vector2d;
  struct B0 {
    double b0, db0;
    Vec2 t_lam;
  };
  auto b0_of = [&](double lam, const UpdateGeometry& g) -> std::optional<B0> {
    const auto tl = recover_normal_gradient(lam, tri.base, g, model);
    if (!tl) return std::nullopt;
    const double a = g.q.dot(tl->t), c = g.ell.dot(tl->t);
    if (!(c > 0)) return std::nullopt;
    const Vec2 dq = rot90(g.dell);
    const double da = dq.dot(tl->t) + g.q.dot(tl->dt);
    const double dc = g.dell.dot(tl->t) + g.ell.dot(tl->dt);
    return B0{a / c, (da * c - a * dc) / (c * c), tl->t};
  };
  auto f = [&](const V& x, V& grad) {
    const auto g = UpdateGeometry::make(tri.xhat, tri.x1, tri.x2, x(0));
    const auto b = b0_of(x(0), g);
    if (!b) {
      grad.setZero();
      return std::numeric_limits<double>::infinity();
    }
    const auto bi = hermite_base(x(0), tri.base, tri.x1, tri.x2);
    const auto p = graph_cost_partials(g, bi.T, bi.dT, b->b0, x(1), model);
    grad << p.dlam + p.db0 * b->db0, p.db1;
    return p.F;
  };
  auto r = solve_with_kkt<2>(f, V(ws.lam, 0), newton_options(tri));
  const auto g = UpdateGeometry::make(tri.xhat, tri.x1, tri.x2, r.x(0));
  const auto b = b0_of(r.x(0), g);
  if (!b || !std::isfinite(r.value)) return rejected_result();
  return finish(tri, model, r.value, r.x(0), b->t_lam, g.ell + r.x(1) * g.q, r.converged,
                r.iterations);
}

UpdateResult solve_jmm3(const TriangleData& tri, const SlownessModel& model, const WarmStart& ws) {
  using V = Eigen::Vector2d;
  auto f = [&](const V& x, V& grad) {
    const auto g = UpdateGeometry::make(tri.xhat, tri.x1, tri.x2, x(0));
    const auto bi = hermite_base(x(0), tri.base, tri.x1, tri.x2);
    const Vec2 th = unit_from_angle(x(1));
    const Vec2 th_perp = rot90(th);
    const Vec2 tl = reflect_tangent(g.ell, th);
    const double c = g.ell.dot(th);
    const Vec2 dtl_dlam = 2 * (g.dell * c + g.ell * g.dell.dot(th));
    const Vec2 dtl_dth = -th_perp + 2 * g.ell * g.ell.dot(th_perp);
    const auto p = curve_cost_partials(g, bi.T, bi.dT, tl, th, model);
    grad << p.dlam + p.dt_lam.dot(dtl_dlam), p.dt_hat.dot(th_perp) + p.dt_lam.dot(dtl_dth);
    return p.F;
  };
  auto r = solve_with_kkt<2>(f, V(ws.lam, initial_theta(tri, ws)), newton_options(tri));
  const auto g = UpdateGeometry::make(tri.xhat, tri.x1, tri.x2, r.x(0));
  const Vec2 th = unit_from_angle(r.x(1));
  return finish(tri, model, r.value, r.x(0), reflect_tangent(g.ell, th), th, r.converged,
                r.iterations);
}

UpdateResult solve_jmm3g(const TriangleData& tri, const SlownessModel& model, const WarmStart& ws) {
  using V = Eigen::Vector2d;
  // Quadratic graph: zeta = b (K0 - K1), i.e. b0 = b, b1 = -b.
  auto f = [&](const V& x, V& grad) {
    const auto g = UpdateGeometry::make(tri.xhat, tri.x1, tri.x2, x(0));
    const auto bi = hermite_base(x(0), tri.base, tri.x1, tri.x2);
    const auto p = graph_cost_partials(g, bi.T, bi.dT, x(1), -x(1), model);
    grad << p.dlam, p.db0 - p.db1;
    return p.F;
  };
  auto r = solve_with_kkt<2>(f, V(ws.lam, 0), newton_options(tri));
  const auto g = UpdateGeometry::make(tri.xhat, tri.x1, tri.x2, r.x(0));
  return finish(tri, model, r.value, r.x(0), (g.ell + r.x(1) * g.q).normalized(),
                g.ell - r.x(1) * g.q, r.converged, r.iterations);
}

UpdateResult solve_triangle(Solver solver, const TriangleData& tri, const SlownessModel& model,
                            const BicubicCell* cell, const WarmStart& ws) {
  switch (solver) {
    case Solver::jmm1: return solve_jmm1(tri, model, ws);
    case Solver::jmm1g: return solve_jmm1g(tri, model, ws);
    case Solver::jmm2: return solve_jmm2(tri, model, ws);
    case Solver::jmm2g: return solve_jmm2g(tri, model, ws);
    case Solver::jmm3: return solve_jmm3(tri, model, ws);
    case Solver::jmm3g: return solve_jmm3g(tri, model, ws);
    case Solver::jmm4: return solve_jmm4(tri, model, cell, ws);
    default: throw InvalidInput("solve_triangle: not a jet marching solver");
  }
}

UpdateResult line_update(const Vec2& x1, double T1, const Vec2& xhat, const SlownessModel& model) {
  const Vec2 d = xhat - x1;
  UpdateResult out;
  out.L = d.norm();
  out.t_hat = d / out.L;
  out.t_lam = out.t_hat;
  out.value = T1 + simpson(model.s(x1), model.s(0.5 * (x1 + xhat)), model.s(xhat), out.L);
  out.grad = model.s(xhat) * out.t_hat;
  out.lam = 0;
  out.converged = true;
  return out;
}

const BicubicCell* upwind_cell(const Grid2& grid, const CellStore& cells, NodeIndex xhat,
                               NodeIndex a, NodeIndex b) {
  CellIndex cand[2];
  int n = 0;
  if (a.i == b.i && std::abs(a.j - b.j) == 1) {
    const int j = std::min(a.j, b.j);
    cand[n++] = {a.i - 1, j};
    cand[n++] = {a.i, j};
  } else if (a.j == b.j && std::abs(a.i - b.i) == 1) {
    const int i = std::min(a.i, b.i);
    cand[n++] = {i, a.j - 1};
    cand[n++] = {i, a.j};
  } else if (std::abs(a.i - b.i) == 1 && std::abs(a.j - b.j) == 1) {
    cand[n++] = {std::min(a.i, b.i), std::min(a.j, b.j)};
  }
  auto has_corner = [&](CellIndex c, NodeIndex p) {
    return p.i >= c.i && p.i <= c.i + 1 && p.j >= c.j && p.j <= c.j + 1;
  };
  const BicubicCell* fallback = nullptr;
  for (int k = 0; k < n; ++k) {
    if (!grid.contains(cand[k])) continue;
    const BicubicCell* cell = cells.valid_cell(cand[k]);
    if (!cell) continue;
    if (!has_corner(cand[k], xhat)) return cell;
    fallback = cell;
  }
  return fallback;
}

namespace {

bool interior(double lam) { return lam > kLamEps && lam < 1 - kLamEps; }

UpdateResult triangle(const UpdateContext& ctx, NodeIndex xhat, NodeIndex a, NodeIndex b,
                      const WarmStart& ws) {
  const int ia = ctx.grid.flat(a), ib = ctx.grid.flat(b);
  TriangleData tri{ctx.grid.point(xhat), ctx.grid.point(a), ctx.grid.point(b),
                   BaseJet{ctx.jets.T[ia], ctx.jets.T[ib], ctx.jets.grad[ia], ctx.jets.grad[ib]}};
  const BicubicCell* cell = nullptr;
  if (ctx.solver == Solver::jmm4 && ctx.cells) cell = upwind_cell(ctx.grid, *ctx.cells, xhat, a, b);
  return solve_triangle(ctx.solver, tri, ctx.model, cell, ws);
}

void require_jet_solver(Solver s) {
  if (!is_jet_solver(s)) throw InvalidInput("bottom-up updates require a jet marching solver");
}

}  // namespace

std::optional<Candidate> bottom_up(const UpdateContext& ctx, NodeIndex xhat) {
  require_jet_solver(ctx.solver);
  const Vec2 xh = ctx.grid.point(xhat);
  std::optional<Candidate> best;
  int best_ring = -1;

  const int ring_size = ctx.stencil == Stencil::eight ? 8 : 4;
  auto ring_node = [&](int r) -> NodeIndex {
    r = ((r % ring_size) + ring_size) % ring_size;
    const auto& off = ctx.stencil == Stencil::eight ? kRing8[r] : kRing4[r];
    return {xhat.i + off[0], xhat.j + off[1]};
  };
  auto usable = [&](NodeIndex m) { return ctx.grid.contains(m) && ctx.jets.valid(ctx.grid.flat(m)); };

  for (int r = 0; r < ring_size; ++r) {
    const NodeIndex m = ring_node(r);
    if (!usable(m)) continue;
    const int im = ctx.grid.flat(m);
    auto res = line_update(ctx.grid.point(m), ctx.jets.T[im], xh, ctx.model);
    if (!best || res.value < best->result.value) {
      best = Candidate{res, im, -1};
      best_ring = r;
    }
  }
  if (!best) return best;

  const NodeIndex x1 = ring_node(best_ring);
  const double theta = std::atan2(best->result.t_hat.y(), best->result.t_hat.x());
  // Ring-edges (r-1, r) then (r, r+1), in enumeration order.
  for (int side = 0; side < 2; ++side) {
    const NodeIndex other = ring_node(side == 0 ? best_ring - 1 : best_ring + 1);
    if (!usable(other)) continue;
    const NodeIndex a = side == 0 ? other : x1;
    const NodeIndex b = side == 0 ? x1 : other;
    WarmStart ws{side == 0 ? 0.75 : 0.25, theta};
    auto res = triangle(ctx, xhat, a, b, ws);
    if (res.rejected || !res.converged || !interior(res.lam)) continue;
    if (res.value < best->result.value) best = Candidate{res, ctx.grid.flat(a), ctx.grid.flat(b)};
  }
  return best;
}

std::optional<Candidate> brute_force(const UpdateContext& ctx, NodeIndex xhat) {
  require_jet_solver(ctx.solver);
  const Vec2 xh = ctx.grid.point(xhat);
  std::optional<Candidate> best;
  for (const auto& m : ctx.grid.neighbors(xhat, ctx.stencil)) {
    const int im = ctx.grid.flat(m);
    if (!ctx.jets.valid(im)) continue;
    auto res = line_update(ctx.grid.point(m), ctx.jets.T[im], xh, ctx.model);
    if (!best || res.value < best->result.value) best = Candidate{res, im, -1};
  }
  for (const auto& [a, b] : ctx.grid.update_triangles(xhat, ctx.stencil)) {
    if (!ctx.jets.valid(ctx.grid.flat(a)) || !ctx.jets.valid(ctx.grid.flat(b))) continue;
    auto res = triangle(ctx, xhat, a, b, WarmStart{});
    if (res.rejected || !res.converged || !interior(res.lam)) continue;
    if (!best || res.value < best->result.value)
      best = Candidate{res, ctx.grid.flat(a), ctx.grid.flat(b)};
  }
  return best;
}

}  // namespace jmm
