#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "jmm/types.hpp"

namespace jmm {

enum class ModelKind { constant, linear1, linear2, sine, sloth, counterexample };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view key);

/// Axis-aligned square [lo, lo + extent]^2.
struct Domain {
  Vec2 lo{0, 0};
  double extent = 1;
  bool contains(const Vec2& x, double tol = 1e-12) const {
    return x.x() >= lo.x() - tol && x.y() >= lo.y() - tol && x.x() <= lo.x() + extent + tol &&
           x.y() <= lo.y() + extent + tol;
  }
};

/// Speed of sound c(x) = v0 + v^T x.
struct LinearSpeed {
  double v0 = 1;
  Vec2 v{0, 0};
};

/// Slowness models with closed-form eikonals for a point source at the origin.
///
///   constant        s = s0,                      tau = s0 |x|
///   linear1/2       s = 1 / (1/s0 + v^T x),      tau = acosh(1 + s0 s |v|^2 |x|^2 / 2) / |v|
///   counterexample  s = 2 / (1 + x), i.e. linear with s0 = 2, v = (1/2, 0)
///   sine            tau = x^2/2 + 2 sin((x + y)/2)^2,  s = |grad tau|
///   sloth           s^2 = s0^2 + 2 v^T x  (squared slowness linear)
///
/// All derivatives are hand-derived closed forms.
class SlownessModel {
 public:
  SlownessModel(ModelKind kind, double s0, Vec2 v);

  /// Model with the parameters and domain of the named test problem.
  static SlownessModel standard(ModelKind kind);

  ModelKind kind() const { return kind_; }
  double s0() const { return s0_; }
  const Vec2& v() const { return v_; }
  const Vec2& source() const { return source_; }
  const Domain& domain() const { return domain_; }
  void set_domain(const Domain& d) { domain_ = d; }

  double s(const Vec2& x) const;
  Vec2 grad_s(const Vec2& x) const;
  double c(const Vec2& x) const { return 1.0 / s(x); }
  Vec2 grad_c(const Vec2& x) const;

  /// Throws InvalidInput if s is not positive at x.
  void check_domain(const Vec2& x) const;

  double tau(const Vec2& x) const;
  /// Throws SingularityError at the source.
  Vec2 grad_tau(const Vec2& x) const;
  Mat2 hess_tau(const Vec2& x) const;

  /// Present when the speed c = 1/s is an affine function of x.
  std::optional<LinearSpeed> linear_speed() const;

 private:
  void require_off_source(const Vec2& x) const;

  ModelKind kind_;
  double s0_;
  Vec2 v_;
  Vec2 source_{0, 0};
  Domain domain_;
};

}  // namespace jmm
