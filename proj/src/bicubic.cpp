#include "jmm/bicubic.hpp"

#include "jmm/errors.hpp"

namespace jmm {

namespace {

// Maps [p(0), p(1), p'(0), p'(1)] to monomial coefficients of a cubic on [0, 1].
const Eigen::Matrix4d& hermite_to_monomial() {
  static const Eigen::Matrix4d M = [] {
    Eigen::Matrix4d m;
    m << 1, 0, 0, 0,
         0, 0, 1, 0,
        -3, 3, -2, -1,
         2, -2, 1, 1;
    return m;
  }();
  return M;
}

}  // namespace

BicubicCell::BicubicCell(const Vec2& origin, double h, const CellCornerData& d)
    : origin_(origin), h_(h), valid_(true) {
  // Local data: f, f_u = h T_x, f_v = h T_y, f_uv = h^2 T_xy.
  auto f = [&](int k) { return d.T[k]; };
  auto fu = [&](int k) { return h * d.grad[k].x(); };
  auto fv = [&](int k) { return h * d.grad[k].y(); };
  auto fuv = [&](int k) { return h * h * d.Txy[k]; };
  // Rows: [u=0, u=1, d/du at 0, d/du at 1]; columns likewise in v.
  // Corner k: 0 = (0,0), 1 = (1,0), 2 = (0,1), 3 = (1,1).
  Eigen::Matrix4d G;
  G << f(0), f(2), fv(0), fv(2),
       f(1), f(3), fv(1), fv(3),
       fu(0), fu(2), fuv(0), fuv(2),
       fu(1), fu(3), fuv(1), fuv(3);
  const auto& M = hermite_to_monomial();
  a_ = M * G * M.transpose();
}

bool BicubicCell::contains(const Vec2& x, double tol) const {
  const double u = (x.x() - origin_.x()) / h_;
  const double v = (x.y() - origin_.y()) / h_;
  return u >= -tol && v >= -tol && u <= 1 + tol && v <= 1 + tol;
}

Jet2 BicubicCell::eval_unchecked(const Vec2& x) const {
  const double u = (x.x() - origin_.x()) / h_;
  const double v = (x.y() - origin_.y()) / h_;
  const double U[4] = {1, u, u * u, u * u * u};
  const double V[4] = {1, v, v * v, v * v * v};
  const double dU[4] = {0, 1, 2 * u, 3 * u * u};
  const double dV[4] = {0, 1, 2 * v, 3 * v * v};
  const double ddU[4] = {0, 0, 2, 6 * u};
  const double ddV[4] = {0, 0, 2, 6 * v};
  double f = 0, fu = 0, fv = 0, fuu = 0, fuv = 0, fvv = 0;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      const double c = a_(m, n);
      f += c * U[m] * V[n];
      fu += c * dU[m] * V[n];
      fv += c * U[m] * dV[n];
      fuu += c * ddU[m] * V[n];
      fuv += c * dU[m] * dV[n];
      fvv += c * U[m] * ddV[n];
    }
  Jet2 out;
  out.T = f;
  out.grad = Vec2(fu, fv) / h_;
  const double h2 = h_ * h_;
  out.hess << fuu / h2, fuv / h2, fuv / h2, fvv / h2;
  return out;
}

Jet2 eval_cell(const BicubicCell& cell, const Vec2& x) {
  if (!cell.valid()) throw InvalidInput("evaluation of a cell that is not valid");
  if (!cell.contains(x)) throw InvalidInput("evaluation point lies outside the cell");
  return cell.eval_unchecked(x);
}

}  // namespace jmm
