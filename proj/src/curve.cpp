#include "jmm/curve.hpp"

#include <cmath>

#include "jmm/errors.hpp"

namespace jmm {

UpdateGeometry UpdateGeometry::make(const Vec2& xhat, const Vec2& x1, const Vec2& x2, double lam) {
  UpdateGeometry g;
  g.xhat = xhat;
  g.x1 = x1;
  g.x2 = x2;
  g.lam = lam;
  g.dx = x2 - x1;
  g.xlam = x1 + lam * g.dx;
  const Vec2 r = xhat - g.xlam;
  g.L = r.norm();
  if (!(g.L > 0)) throw InvalidInput("update base point coincides with the update node");
  g.ell = r / g.L;
  g.q = rot90(g.ell);
  g.dL = -g.ell.dot(g.dx);
  g.dell = -(g.dx - g.ell * g.ell.dot(g.dx)) / g.L;
  return g;
}

HermiteK hermite_K(double sigma, double L) {
  if (!(L > 0)) throw InvalidInput("hermite_K requires L > 0");
  const double u = sigma / L;
  return {sigma * (1 - u) * (1 - u), sigma * u * (u - 1), 1 - 4 * u + 3 * u * u,
          -2 * u + 3 * u * u};
}

CurveEval cubic_curve_mid(const UpdateGeometry& g, const Vec2& t_lam, const Vec2& t_hat) {
  CurveEval e;
  e.form = CurveForm::curve;
  e.t_lam = t_lam;
  e.t_hat = t_hat;
  e.phi_mid = 0.5 * (g.xlam + g.xhat) + (g.L / 8) * (t_lam - t_hat);
  e.dphi_mid = 1.5 * g.ell - 0.25 * (t_lam + t_hat);
  return e;
}

CurveEval graph_curve_mid(const UpdateGeometry& g, double b0, double b1) {
  CurveEval e;
  e.form = CurveForm::graph;
  e.b0 = b0;
  e.b1 = b1;
  // zeta(L/2) = (b0 - b1) L / 8, zeta'(L/2) = -(b0 + b1) / 4
  e.phi_mid = 0.5 * (g.xlam + g.xhat) + g.q * ((b0 - b1) * g.L / 8);
  e.dphi_mid = g.ell - g.q * ((b0 + b1) / 4);
  e.t_lam = (g.ell + b0 * g.q).normalized();
  e.t_hat = (g.ell + b1 * g.q).normalized();
  return e;
}

std::pair<Vec2, Vec2> cubic_curve_at(const UpdateGeometry& g, const Vec2& t_lam,
                                     const Vec2& t_hat, double sigma) {
  const auto K = hermite_K(sigma, g.L);
  const Vec2 a = t_lam - g.ell, b = t_hat - g.ell;
  return {g.xlam + sigma * g.ell + a * K.K0 + b * K.K1, g.ell + a * K.dK0 + b * K.dK1};
}

std::pair<Vec2, Vec2> graph_curve_at(const UpdateGeometry& g, double b0, double b1, double sigma) {
  const auto K = hermite_K(sigma, g.L);
  return {g.xlam + sigma * g.ell + g.q * (b0 * K.K0 + b1 * K.K1),
          g.ell + g.q * (b0 * K.dK0 + b1 * K.dK1)};
}

double simpson_cost(const UpdateGeometry& g, const CurveEval& curve, double T_base,
                    const SlownessModel& model) {
  if (curve.form == CurveForm::curve) {
    return T_base + simpson(model.s(g.xlam), model.s(curve.phi_mid) * curve.dphi_mid.norm(),
                            model.s(g.xhat), g.L);
  }
  return T_base + simpson(model.s(g.xlam) * std::hypot(1.0, curve.b0),
                          model.s(curve.phi_mid) * curve.dphi_mid.norm(),
                          model.s(g.xhat) * std::hypot(1.0, curve.b1), g.L);
}

double general_simpson_cost(const UpdateGeometry& g, const Vec2& t_lam, const Vec2& t_hat,
                            double T_base, const SlownessModel& model) {
  const auto [p0, v0] = cubic_curve_at(g, t_lam, t_hat, 0);
  const auto [pm, vm] = cubic_curve_at(g, t_lam, t_hat, g.L / 2);
  const auto [p1, v1] = cubic_curve_at(g, t_lam, t_hat, g.L);
  return T_base + simpson(model.s(p0) * v0.norm(), model.s(pm) * vm.norm(), model.s(p1) * v1.norm(), g.L);
}

QuadraticCurve quadratic_curve(const UpdateGeometry& g, const Vec2& t_hat, double T_base,
                               const SlownessModel& model) {
  QuadraticCurve out;
  auto& e = out.curve;
  e.form = CurveForm::curve;
  e.t_hat = t_hat;
  e.t_lam = reflect_tangent(g.ell, t_hat);
  const double c = g.ell.dot(t_hat);
  const Vec2 normal_part = t_hat - g.ell * c;  // (I - ell ell^T) t_hat
  e.phi_mid = 0.5 * (g.xlam + g.xhat) - (g.L / 4) * normal_part;
  // phi'(L/2) = (3 - ell^T t_hat) / 2 ell
  e.dphi_mid = 0.5 * (3 - c) * g.ell;
  out.cost = T_base +
             (g.L / 6) * (model.s(g.xlam) + 2 * (3 - c) * model.s(e.phi_mid) + model.s(g.xhat));
  return out;
}

CurveCostPartials curve_cost_partials(const UpdateGeometry& g, double T, double dT_dlam,
                                      const Vec2& t_lam, const Vec2& t_hat,
                                      const SlownessModel& model) {
  const Vec2 m = 0.5 * (g.xlam + g.xhat) + (g.L / 8) * (t_lam - t_hat);
  const Vec2 w = 1.5 * g.ell - 0.25 * (t_lam + t_hat);
  const double nw = w.norm();
  const double s_lam = model.s(g.xlam);
  const double s_m = model.s(m);
  const double s_hat = model.s(g.xhat);
  const Vec2 gs_lam = model.grad_s(g.xlam);
  const Vec2 gs_m = model.grad_s(m);

  const double S = s_lam + 4 * s_m * nw + s_hat;
  const Vec2 dm = 0.5 * g.dx + (g.dL / 8) * (t_lam - t_hat);
  const Vec2 dw = 1.5 * g.dell;
  const double dS = gs_lam.dot(g.dx) + 4 * (gs_m.dot(dm) * nw + s_m * w.dot(dw) / nw);

  CurveCostPartials p;
  p.F = T + (g.L / 6) * S;
  p.dlam = dT_dlam + (g.dL / 6) * S + (g.L / 6) * dS;
  const double k = 4 * g.L / 6;
  p.dt_lam = k * (gs_m * (g.L / 8) * nw - s_m * w / (4 * nw));
  p.dt_hat = k * (-gs_m * (g.L / 8) * nw - s_m * w / (4 * nw));
  return p;
}

GraphCostPartials graph_cost_partials(const UpdateGeometry& g, double T, double dT_dlam, double b0,
                                      double b1, const SlownessModel& model) {
  const Vec2 R = rot90(g.xhat - g.xlam);  // L q
  const Vec2 m = 0.5 * (g.xlam + g.xhat) + R * ((b0 - b1) / 8);
  const double W0 = std::hypot(1.0, b0);
  const double W1 = std::hypot(1.0, b1);
  const double bm = (b0 + b1) / 4;
  const double Wm = std::hypot(1.0, bm);
  const double s_lam = model.s(g.xlam);
  const double s_m = model.s(m);
  const double s_hat = model.s(g.xhat);
  const Vec2 gs_lam = model.grad_s(g.xlam);
  const Vec2 gs_m = model.grad_s(m);

  const double S = s_lam * W0 + 4 * s_m * Wm + s_hat * W1;
  const Vec2 dm = 0.5 * g.dx - rot90(g.dx) * ((b0 - b1) / 8);
  const double dS = gs_lam.dot(g.dx) * W0 + 4 * gs_m.dot(dm) * Wm;
  const double dWm = bm / (4 * Wm);  // d Wm / d b0 = d Wm / d b1
  const double gR = gs_m.dot(R) / 8;

  GraphCostPartials p;
  const double k = g.L / 6;
  p.F = T + k * S;
  p.dlam = dT_dlam + (g.dL / 6) * S + k * dS;
  p.db0 = k * (s_lam * b0 / W0 + 4 * (gR * Wm + s_m * dWm));
  p.db1 = k * (s_hat * b1 / W1 + 4 * (-gR * Wm + s_m * dWm));
  return p;
}

}  // namespace jmm
