#include "jmm/slowness.hpp"

#include <cmath>

#include "jmm/errors.hpp"

namespace jmm {

namespace {

constexpr double kSourceTol = 1e-300;

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::constant: return "constant";
    case ModelKind::linear1: return "linear1";
    case ModelKind::linear2: return "linear2";
    case ModelKind::sine: return "sine";
    case ModelKind::sloth: return "sloth";
    case ModelKind::counterexample: return "counterexample";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view key) {
  for (auto k : {ModelKind::constant, ModelKind::linear1, ModelKind::linear2, ModelKind::sine,
                 ModelKind::sloth, ModelKind::counterexample})
    if (to_string(k) == key) return k;
  throw InvalidInput("unknown problem '" + std::string(key) + "'");
}

SlownessModel::SlownessModel(ModelKind kind, double s0, Vec2 v) : kind_(kind), s0_(s0), v_(v) {
  if (!(s0 > 0)) throw InvalidInput("s0 must be positive");
  switch (kind) {
    case ModelKind::constant:
    case ModelKind::linear1:
    case ModelKind::sine: domain_ = {{-1, -1}, 2}; break;
    case ModelKind::linear2: domain_ = {{0, 0}, 1}; break;
    case ModelKind::sloth: domain_ = {{0, 0}, 0.5}; break;
    case ModelKind::counterexample: domain_ = {{0, 0}, 1}; break;
  }
}

SlownessModel SlownessModel::standard(ModelKind kind) {
  switch (kind) {
    case ModelKind::constant: return {kind, 1.0, {0, 0}};
    case ModelKind::linear1: return {kind, 1.0, {0.133, -0.0933}};
    case ModelKind::linear2: return {kind, 2.0, {0.5, 0}};
    case ModelKind::sine: return {kind, 1.0, {0, 0}};
    case ModelKind::sloth: return {kind, 2.0, {0, -3}};
    case ModelKind::counterexample: return {kind, 2.0, {0.5, 0}};
  }
  throw InvalidInput("unknown model kind");
}

void SlownessModel::check_domain(const Vec2& x) const {
  switch (kind_) {
    case ModelKind::linear1:
    case ModelKind::linear2:
    case ModelKind::counterexample:
      if (!(1.0 / s0_ + v_.dot(x) > 0))
        throw InvalidInput("linear speed is not positive at the evaluation point");
      break;
    case ModelKind::sloth:
      if (!(s0_ * s0_ + 2 * v_.dot(x) > 0))
        throw InvalidInput("sloth argument is not positive at the evaluation point");
      break;
    default: break;
  }
}

double SlownessModel::s(const Vec2& x) const {
  switch (kind_) {
    case ModelKind::constant: return s0_;
    case ModelKind::linear1:
    case ModelKind::linear2:
    case ModelKind::counterexample: {
      const double c = 1.0 / s0_ + v_.dot(x);
      if (!(c > 0)) check_domain(x);
      return 1.0 / c;
    }
    case ModelKind::sine: {
      const double a = std::sin(x.x() + x.y());
      const double b = x.x() + a;
      return std::sqrt(a * a + b * b);
    }
    case ModelKind::sloth: {
      const double arg = s0_ * s0_ + 2 * v_.dot(x);
      if (!(arg > 0)) check_domain(x);
      return std::sqrt(arg);
    }
  }
  return 0;
}

Vec2 SlownessModel::grad_s(const Vec2& x) const {
  switch (kind_) {
    case ModelKind::constant: return Vec2::Zero();
    case ModelKind::linear1:
    case ModelKind::linear2:
    case ModelKind::counterexample: {
      const double sx = s(x);
      return -sx * sx * v_;
    }
    case ModelKind::sine: {
      // s = |g| with g = grad tau, so grad s = H g / s.
      const double sum = x.x() + x.y();
      const double sn = std::sin(sum), cs = std::cos(sum);
      const Vec2 g{x.x() + sn, sn};
      Mat2 H;
      H << 1 + cs, cs, cs, cs;
      const double sx = g.norm();
      if (sx == 0) return Vec2::Zero();
      return H * g / sx;
    }
    case ModelKind::sloth: return v_ / s(x);
  }
  return Vec2::Zero();
}

Vec2 SlownessModel::grad_c(const Vec2& x) const {
  const double sx = s(x);
  return -grad_s(x) / (sx * sx);
}

void SlownessModel::require_off_source(const Vec2& x) const {
  if ((x - source_).squaredNorm() <= kSourceTol)
    throw SingularityError("eikonal derivatives are undefined at the point source");
}

double SlownessModel::tau(const Vec2& x) const {
  const Vec2 d = x - source_;
  switch (kind_) {
    case ModelKind::constant: return s0_ * d.norm();
    case ModelKind::linear1:
    case ModelKind::linear2:
    case ModelKind::counterexample: {
      const double nv = v_.norm();
      if (nv == 0) return s0_ * d.norm();
      // acosh(1 + w) = log1p(w + sqrt(w (2 + w))) avoids cancellation near the source.
      const double w = 0.5 * s0_ * s(x) * nv * nv * d.squaredNorm();
      return std::log1p(w + std::sqrt(w * (2 + w))) / nv;
    }
    case ModelKind::sine: {
      const double a = std::sin(0.5 * (x.x() + x.y()));
      return 0.5 * x.x() * x.x() + 2 * a * a;
    }
    case ModelKind::sloth: {
      // Ray x(sigma) = x0 + p0 sigma + v sigma^2 / 2, tau = Sbar sigma - |v|^2 sigma^3 / 6.
      const double S = s0_ * s0_ + 2 * v_.dot(x);
      const double Sbar = 0.5 * (s0_ * s0_ + S);
      const double g2 = v_.squaredNorm();
      const double d2 = d.squaredNorm();
      const double R = std::sqrt(Sbar * Sbar - g2 * d2);
      const double sigma = std::sqrt(2 * d2 / (Sbar + R));
      return Sbar * sigma - g2 * sigma * sigma * sigma / 6;
    }
  }
  return 0;
}

Vec2 SlownessModel::grad_tau(const Vec2& x) const {
  const Vec2 d = x - source_;
  switch (kind_) {
    case ModelKind::constant:
      require_off_source(x);
      return s0_ * d / d.norm();
    case ModelKind::linear1:
    case ModelKind::linear2:
    case ModelKind::counterexample: {
      require_off_source(x);
      const double nv = v_.norm();
      if (nv == 0) return s0_ * d / d.norm();
      const double sx = s(x);
      const double k = 0.5 * s0_ * nv * nv;
      const double w = k * sx * d.squaredNorm();
      // grad w = k (grad s |d|^2 + 2 s d)
      const Vec2 gw = k * (grad_s(x) * d.squaredNorm() + 2 * sx * d);
      return gw / (nv * std::sqrt(w * (2 + w)));
    }
    case ModelKind::sine: {
      const double sn = std::sin(x.x() + x.y());
      return {x.x() + sn, sn};
    }
    case ModelKind::sloth: {
      require_off_source(x);
      const double S = s0_ * s0_ + 2 * v_.dot(x);
      const double Sbar = 0.5 * (s0_ * s0_ + S);
      const double g2 = v_.squaredNorm();
      const double d2 = d.squaredNorm();
      const double R = std::sqrt(Sbar * Sbar - g2 * d2);
      const double sigma = std::sqrt(2 * d2 / (Sbar + R));
      // Momentum at the end of the ray.
      return d / sigma + 0.5 * sigma * v_;
    }
  }
  return Vec2::Zero();
}

Mat2 SlownessModel::hess_tau(const Vec2& x) const {
  const Vec2 d = x - source_;
  switch (kind_) {
    case ModelKind::constant: {
      require_off_source(x);
      const double r = d.norm();
      const Vec2 u = d / r;
      return s0_ * (Mat2::Identity() - u * u.transpose()) / r;
    }
    case ModelKind::linear1:
    case ModelKind::linear2:
    case ModelKind::counterexample: {
      require_off_source(x);
      const double nv = v_.norm();
      if (nv == 0) {
        const double r = d.norm();
        const Vec2 u = d / r;
        return s0_ * (Mat2::Identity() - u * u.transpose()) / r;
      }
      const double sx = s(x);
      const Vec2 gs = grad_s(x);
      const Mat2 Hs = 2 * sx * sx * sx * v_ * v_.transpose();
      const double k = 0.5 * s0_ * nv * nv;
      const double d2 = d.squaredNorm();
      const double w = k * sx * d2;
      const Vec2 gw = k * (gs * d2 + 2 * sx * d);
      const Mat2 Hw = k * (Hs * d2 + 2 * gs * d.transpose() + 2 * d * gs.transpose() +
                           2 * sx * Mat2::Identity());
      // tau = acosh(1 + w) / |v|; with D = w (2 + w) = (1 + w)^2 - 1:
      // grad tau = grad w / (|v| sqrt D), hess tau = [Hw / sqrt D - (1 + w) gw gw^T / D^(3/2)] / |v|
      const double D = w * (2 + w);
      const double sqD = std::sqrt(D);
      return (Hw / sqD - (1 + w) * gw * gw.transpose() / (D * sqD)) / nv;
    }
    case ModelKind::sine: {
      const double cs = std::cos(x.x() + x.y());
      Mat2 H;
      H << 1 + cs, cs, cs, cs;
      return H;
    }
    case ModelKind::sloth: {
      require_off_source(x);
      const double S = s0_ * s0_ + 2 * v_.dot(x);
      const double Sbar = 0.5 * (s0_ * s0_ + S);
      const double g2 = v_.squaredNorm();
      const double d2 = d.squaredNorm();
      const double R = std::sqrt(Sbar * Sbar - g2 * d2);
      const double P = Sbar + R;
      const double sigma2 = 2 * d2 / P;
      const double sigma = std::sqrt(sigma2);
      // grad Sbar = v, grad R = (Sbar v - |v|^2 d) / R
      const Vec2 gR = (Sbar * v_ - g2 * d) / R;
      const Vec2 gsig2 = 4 * d / P - 2 * d2 * (v_ + gR) / (P * P);
      const Vec2 gsig = gsig2 / (2 * sigma);
      // grad tau = d / sigma + sigma v / 2
      const Vec2 a = -d / sigma2 + 0.5 * v_;
      return Mat2::Identity() / sigma + a * gsig.transpose();
    }
  }
  return Mat2::Zero();
}

std::optional<LinearSpeed> SlownessModel::linear_speed() const {
  switch (kind_) {
    case ModelKind::constant: return LinearSpeed{1.0 / s0_, Vec2::Zero()};
    case ModelKind::linear1:
    case ModelKind::linear2:
    case ModelKind::counterexample: return LinearSpeed{1.0 / s0_, v_};
    default: return std::nullopt;
  }
}

}  // namespace jmm
