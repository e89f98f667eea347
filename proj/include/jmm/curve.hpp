#pragma once

#include "jmm/slowness.hpp"
#include "jmm/types.hpp"

namespace jmm {

/// Geometry of one triangle update with base point x_lam = (1 - lam) x1 + lam x2.
/// dL and dell are derivatives of L and ell with respect to lam.
struct UpdateGeometry {
  Vec2 xhat, x1, x2;
  double lam = 0;
  Vec2 xlam;
  Vec2 dx;  // x2 - x1
  double L = 0;
  Vec2 ell;  // (xhat - xlam) / L
  Vec2 q;    // ell rotated counterclockwise by pi/2
  double dL = 0;
  Vec2 dell;

  static UpdateGeometry make(const Vec2& xhat, const Vec2& x1, const Vec2& x2, double lam);
  /// Degenerate base x1 = x2 (line update).
  static UpdateGeometry line(const Vec2& xhat, const Vec2& x1) { return make(xhat, x1, x1, 0); }
};

/// Simpson's rule on [0, L] from endpoint and midpoint samples.
inline double simpson(double f0, double fmid, double f1, double L) {
  return (L / 6) * (f0 + 4 * fmid + f1);
}

struct HermiteK {
  double K0, K1, dK0, dK1;
};

/// Hermite basis on [0, L] with K(0) = K(L) = 0, K0'(0) = 1 = K1'(L), K1'(0) = 0 = K0'(L).
HermiteK hermite_K(double sigma, double L);

enum class CurveForm { curve, graph };

struct CurveEval {
  CurveForm form = CurveForm::curve;
  Vec2 phi_mid;
  Vec2 dphi_mid;
  Vec2 t_lam;  // curve form: tangent at x_lam
  Vec2 t_hat;  // curve form: tangent at xhat; graph form: unit direction of phi'(L)
  double b0 = 0, b1 = 0;
};

/// Midpoint data of phi = ell + (t_lam - ell') K0 + (t_hat - ell') K1.
CurveEval cubic_curve_mid(const UpdateGeometry& g, const Vec2& t_lam, const Vec2& t_hat);

/// Midpoint data of phi = ell + q (b0 K0 + b1 K1).
CurveEval graph_curve_mid(const UpdateGeometry& g, double b0, double b1);

/// Position and velocity of the cubic parametric curve at sigma in [0, L].
std::pair<Vec2, Vec2> cubic_curve_at(const UpdateGeometry& g, const Vec2& t_lam, const Vec2& t_hat,
                                     double sigma);
std::pair<Vec2, Vec2> graph_curve_at(const UpdateGeometry& g, double b0, double b1, double sigma);

/// Simpson-rule Fermat cost. Curve form takes unit endpoint speeds, graph form
/// sqrt(1 + b0^2) and sqrt(1 + b1^2).
double simpson_cost(const UpdateGeometry& g, const CurveEval& curve, double T_base,
                    const SlownessModel& model);

/// Simpson cost using the true endpoint speeds |phi'(0)|, |phi'(L)| of the cubic
/// parametric curve. Reference only; the solvers use the unit-speed form.
double general_simpson_cost(const UpdateGeometry& g, const Vec2& t_lam, const Vec2& t_hat,
                            double T_base, const SlownessModel& model);

struct QuadraticCurve {
  CurveEval curve;
  double cost = 0;
};

/// Quadratic characteristic: t_lam is the reflection of t_hat across ell'.
QuadraticCurve quadratic_curve(const UpdateGeometry& g, const Vec2& t_hat, double T_base,
                               const SlownessModel& model);

/// Reflection of t_hat across ell: -(I - 2 ell ell^T) t_hat.
inline Vec2 reflect_tangent(const Vec2& ell, const Vec2& t_hat) {
  return -t_hat + 2 * ell * ell.dot(t_hat);
}

/// Curve-form cost with partial derivatives. dlam holds t_lam and t_hat fixed.
struct CurveCostPartials {
  double F = 0;
  double dlam = 0;
  Vec2 dt_lam{0, 0};
  Vec2 dt_hat{0, 0};
};

CurveCostPartials curve_cost_partials(const UpdateGeometry& g, double T, double dT_dlam,
                                      const Vec2& t_lam, const Vec2& t_hat,
                                      const SlownessModel& model);

/// Graph-form cost with partial derivatives. dlam holds b0 and b1 fixed.
struct GraphCostPartials {
  double F = 0;
  double dlam = 0;
  double db0 = 0;
  double db1 = 0;
};

GraphCostPartials graph_cost_partials(const UpdateGeometry& g, double T, double dT_dlam, double b0,
                                      double b1, const SlownessModel& model);

}  // namespace jmm
