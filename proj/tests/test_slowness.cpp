#include <doctest.h>

#include <random>

#include "jmm/errors.hpp"
#include "jmm/slowness.hpp"

using namespace jmm;

namespace {

const ModelKind kAll[] = {ModelKind::constant, ModelKind::linear1, ModelKind::linear2,
                          ModelKind::sine, ModelKind::sloth, ModelKind::counterexample};

Vec2 random_point(const SlownessModel& m, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  for (;;) {
    Vec2 x = m.domain().lo + m.domain().extent * Vec2(u(rng), u(rng));
    if (x.norm() > 1e-3) return x;
  }
}

}  // namespace

TEST_CASE("analytic solutions satisfy the eikonal equation") {
  std::mt19937 rng(7);
  for (auto kind : kAll) {
    const auto m = SlownessModel::standard(kind);
    for (int k = 0; k < 500; ++k) {
      const Vec2 x = random_point(m, rng);
      const double s = m.s(x);
      CHECK(std::abs(m.grad_tau(x).norm() - s) <= 1e-9 * s);
    }
  }
}

TEST_CASE("tau spot values") {
  // 40-digit references
  CHECK(SlownessModel::standard(ModelKind::linear1).tau({0.3, -0.7}) ==
        doctest::Approx(0.7240045010652180031599).epsilon(1e-14));
  CHECK(SlownessModel::standard(ModelKind::linear2).tau({0.6, 0.3}) ==
        doctest::Approx(1.048608130169659424594).epsilon(1e-14));
  CHECK(SlownessModel::standard(ModelKind::sine).tau({0.4, -0.2}) ==
        doctest::Approx(0.09993342215875836887580).epsilon(1e-14));
  CHECK(SlownessModel::standard(ModelKind::constant).tau({0.3, 0.4}) == doctest::Approx(0.5));
}

TEST_CASE("linear tau is accurate near the source") {
  const auto m = SlownessModel::standard(ModelKind::linear2);
  const Vec2 x(1e-7, 0);
  CHECK(m.tau(x) == doctest::Approx(2e-7).epsilon(1e-6));
}

TEST_CASE("grad_s matches central differences at second order") {
  std::mt19937 rng(3);
  for (auto kind : kAll) {
    const auto m = SlownessModel::standard(kind);
    const Vec2 x = random_point(m, rng);
    double prev = 0;
    for (double step : {1e-3, 1e-4}) {
      Vec2 fd;
      for (int a = 0; a < 2; ++a) {
        Vec2 e = Vec2::Zero();
        e(a) = step;
        fd(a) = (m.s(x + e) - m.s(x - e)) / (2 * step);
      }
      const double err = (fd - m.grad_s(x)).norm();
      if (prev > 1e-12) CHECK(err < prev * 0.05);  // ~100x per decade
      prev = err;
    }
    CHECK(prev < 1e-7);
  }
}

TEST_CASE("hess_tau is symmetric and matches differences of grad_tau") {
  std::mt19937 rng(11);
  for (auto kind : kAll) {
    const auto m = SlownessModel::standard(kind);
    for (int k = 0; k < 20; ++k) {
      const Vec2 x = random_point(m, rng);
      if (x.norm() < 0.05) continue;
      const Mat2 H = m.hess_tau(x);
      CHECK(std::abs(H(0, 1) - H(1, 0)) <= 1e-10 * (1 + H.norm()));
      const double step = 1e-5;
      Mat2 fd;
      for (int a = 0; a < 2; ++a) {
        Vec2 e = Vec2::Zero();
        e(a) = step;
        fd.col(a) = (m.grad_tau(x + e) - m.grad_tau(x - e)) / (2 * step);
      }
      CHECK((fd - H).norm() <= 1e-6 * (1 + H.norm()));
    }
  }
}

TEST_CASE("source and domain errors") {
  const auto m = SlownessModel::standard(ModelKind::linear1);
  CHECK_THROWS_AS(m.grad_tau({0, 0}), SingularityError);
  CHECK(m.tau({0, 0}) == 0);
  const SlownessModel bad(ModelKind::linear2, 2.0, {-1.0, 0});
  CHECK_THROWS_AS(bad.check_domain({3.0, 0}), InvalidInput);
  CHECK_THROWS_AS(parse_model_kind("nope"), InvalidInput);
}

TEST_CASE("linear speed description") {
  const auto lin = SlownessModel::standard(ModelKind::linear1).linear_speed();
  REQUIRE(lin);
  CHECK(lin->v0 == 1.0);
  CHECK(lin->v.x() == doctest::Approx(0.133));
  CHECK(SlownessModel::standard(ModelKind::counterexample).linear_speed()->v0 == doctest::Approx(0.5));
  CHECK_FALSE(SlownessModel::standard(ModelKind::sloth).linear_speed());
  CHECK_FALSE(SlownessModel::standard(ModelKind::sine).linear_speed());
}
