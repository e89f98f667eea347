#include <doctest.h>

#include <random>

#include "jmm/baseline.hpp"

using namespace jmm;

namespace {

struct Data {
  std::vector<double> T;
  std::vector<Vec2> G;
  std::vector<State> S;
  explicit Data(const Grid2& g) : T(g.num_nodes(), 1e300), G(g.num_nodes(), Vec2::Zero()), S(g.num_nodes(), State::far) {}
  void set(const Grid2& g, NodeIndex n, double t) {
    T[g.flat(n)] = t;
    S[g.flat(n)] = State::valid;
  }
  JetView view() const { return {T, G, S}; }
};

}  // namespace

TEST_CASE("fmm two-sided update") {
  const auto g = Grid2::square(0, 0, 4, 5);  // h = 1
  const auto m = SlownessModel::standard(ModelKind::constant);
  Data d(g);
  d.set(g, {1, 2}, 0.3);  // west
  d.set(g, {2, 1}, 0.6);  // south
  const auto u = fmm_update(g, d.view(), m, {2, 2});
  REQUIRE(u);
  CHECK(u->T == doctest::Approx((0.3 + 0.6 + std::sqrt(2 - 0.09)) / 2));
  CHECK(u->grad.x() > 0);
  CHECK(u->grad.y() > 0);
}

TEST_CASE("fmm symmetric two-sided and one-sided cases") {
  const auto g = Grid2::square(0, 0, 4, 5);
  const auto m = SlownessModel::standard(ModelKind::constant);
  Data d(g);
  d.set(g, {3, 2}, 0);
  d.set(g, {2, 3}, 0);
  CHECK(fmm_update(g, d.view(), m, {2, 2})->T == doctest::Approx(1 / std::sqrt(2.0)));
  Data e(g);
  e.set(g, {2, 1}, 0.25);
  const auto u = fmm_update(g, e.view(), m, {2, 2});
  CHECK(u->T == doctest::Approx(1.25));
  CHECK((u->grad - Vec2(0, 1)).norm() < 1e-15);
  Data none(g);
  CHECK_FALSE(fmm_update(g, none.view(), m, {2, 2}));
}

TEST_CASE("mp0 triangle minimizer matches a grid search") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  const auto m = SlownessModel::standard(ModelKind::sine);
  for (int k = 0; k < 20; ++k) {
    const Vec2 xh(0.3 + 0.2 * u(rng), 0.1 + 0.2 * u(rng));
    const double h = 0.05;
    const Vec2 x1 = xh - Vec2(h, 0), x2 = xh - Vec2(h, h);
    const double T1 = 0.1 * u(rng), T2 = T1 + 0.04 * (u(rng) - 0.5);
    const auto [val, lam] = mp0_triangle(xh, x1, x2, T1, T2, m);
    double best = 1e300;
    for (int i = 0; i <= 10000; ++i) {
      const double l = i / 10000.0;
      const Vec2 xl = (1 - l) * x1 + l * x2;
      best = std::min(best, (1 - l) * T1 + l * T2 + m.s(0.5 * (xl + xh)) * (xh - xl).norm());
    }
    CHECK(val <= best + 1e-12);
    CHECK(std::abs(val - best) <= 1e-6);
    CHECK(lam >= 0);
    CHECK(lam <= 1);
  }
}

TEST_CASE("olim8 mp0 adjacent source and plane waves") {
  const auto g = Grid2::square(0, 0, 1, 11);
  const auto m = SlownessModel::standard(ModelKind::constant);
  Data d(g);
  d.set(g, {0, 0}, 0);
  const auto u = olim8_mp0_update(g, d.view(), m, {1, 0});
  CHECK(u->T == doctest::Approx(g.h()));
  // Plane wave with direction inside the triangle cone.
  const Vec2 dir = unit_from_angle(0.3);
  Data p(g);
  for (NodeIndex n : {NodeIndex{4, 5}, NodeIndex{4, 4}, NodeIndex{5, 4}}) p.set(g, n, dir.dot(g.point(n)));
  const auto w = olim8_mp0_update(g, p.view(), m, {5, 5});
  CHECK(w->T == doctest::Approx(dir.dot(g.point(NodeIndex{5, 5}))).epsilon(1e-12));
  CHECK((w->grad - dir).norm() < 1e-6);
}
