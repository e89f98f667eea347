#include <doctest.h>

#include <random>

#include "jmm/bicubic.hpp"
#include "jmm/errors.hpp"

using namespace jmm;

namespace {

/// sum c(m, n) x^m y^n with m, n <= 3.
struct Poly {
  Eigen::Matrix4d c;
  double T(const Vec2& p) const { return eval(p, 0, 0); }
  Vec2 grad(const Vec2& p) const { return {eval(p, 1, 0), eval(p, 0, 1)}; }
  double Txy(const Vec2& p) const { return eval(p, 1, 1); }
  Mat2 hess(const Vec2& p) const {
    Mat2 H;
    H << eval(p, 2, 0), eval(p, 1, 1), eval(p, 1, 1), eval(p, 0, 2);
    return H;
  }
  double eval(const Vec2& p, int dx, int dy) const {
    double s = 0;
    for (int m = dx; m < 4; ++m)
      for (int n = dy; n < 4; ++n) {
        double f = c(m, n);
        for (int k = 0; k < dx; ++k) f *= m - k;
        for (int k = 0; k < dy; ++k) f *= n - k;
        s += f * std::pow(p.x(), m - dx) * std::pow(p.y(), n - dy);
      }
    return s;
  }
};

CellCornerData corner_data(const Poly& f, const Vec2& o, double h) {
  CellCornerData d;
  const Vec2 offs[4] = {{0, 0}, {h, 0}, {0, h}, {h, h}};
  for (int k = 0; k < 4; ++k) {
    d.T[k] = f.T(o + offs[k]);
    d.grad[k] = f.grad(o + offs[k]);
    d.Txy[k] = f.Txy(o + offs[k]);
  }
  return d;
}

}  // namespace

TEST_CASE("bicubic reproduces per-variable cubics") {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    Poly f;
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n) f.c(m, n) = u(rng);
    const Vec2 o(u(rng), u(rng));
    const double h = 0.05 + 0.2 * std::abs(u(rng));
    const BicubicCell cell(o, h, corner_data(f, o, h));
    for (int k = 0; k < 25; ++k) {
      const Vec2 x = o + h * Vec2(0.5 * (1 + u(rng)), 0.5 * (1 + u(rng)));
      const Jet2 j = eval_cell(cell, x);
      CHECK(std::abs(j.T - f.T(x)) <= 1e-12);
      CHECK((j.grad - f.grad(x)).norm() <= 1e-12 * (1 + f.grad(x).norm()) / h);
      CHECK((j.hess - f.hess(x)).norm() <= 1e-10 * (1 + f.hess(x).norm()) / (h * h));
    }
  }
}

TEST_CASE("cell evaluation outside the cell throws") {
  Poly f;
  f.c.setZero();
  f.c(1, 1) = 1;
  const BicubicCell cell({0, 0}, 0.1, corner_data(f, {0, 0}, 0.1));
  CHECK(cell.valid());
  CHECK_THROWS_AS(eval_cell(cell, {0.2, 0.05}), InvalidInput);
  CHECK_NOTHROW(eval_cell(cell, {0.1, 0.1}));
  CHECK_THROWS_AS(eval_cell(BicubicCell{}, {0, 0}), InvalidInput);
}
