#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

namespace jmm {

struct NewtonOptions {
  int max_iterations = 20;
  double step_tol = 1e-12;  // scaled by step_scale
  double step_scale = 1;
  double grad_tol = 1e-13;
  double fd_step = 1e-6;
};

template <int N>
struct NewtonResult {
  Eigen::Matrix<double, N, 1> x;
  double value = 0;
  Eigen::Matrix<double, N, 1> grad;
  int iterations = 0;
  bool converged = false;
};

/// Damped Newton for f(x) with x(0) constrained to [0, 1] and the remaining
/// coordinates free. f(x, &grad) returns the value and writes the analytic
/// gradient. The Hessian is a central difference of the gradient; indefinite
/// Hessians are shifted by mu I. Steps are projected onto the box and
/// backtracked until Armijo decrease holds.
template <int N, class Fn>
NewtonResult<N> minimize_newton(Fn&& f, Eigen::Matrix<double, N, 1> x,
                                const NewtonOptions& opt = {}) {
  using Vec = Eigen::Matrix<double, N, 1>;
  using Mat = Eigen::Matrix<double, N, N>;
  NewtonResult<N> r;
  x(0) = std::clamp(x(0), 0.0, 1.0);
  Vec g;
  double fx = f(x, g);

  auto projected_grad_norm = [](const Vec& x, const Vec& g) {
    Vec pg = g;
    if ((x(0) <= 0 && g(0) > 0) || (x(0) >= 1 && g(0) < 0)) pg(0) = 0;
    return pg.norm();
  };

  for (int it = 0; it < opt.max_iterations; ++it) {
    r.iterations = it + 1;
    if (!std::isfinite(fx) || !g.allFinite()) break;
    if (projected_grad_norm(x, g) < opt.grad_tol) {
      r.converged = true;
      break;
    }

    Mat H;
    Vec gp, gm;
    for (int i = 0; i < N; ++i) {
      Vec xp = x, xm = x;
      xp(i) += opt.fd_step;
      xm(i) -= opt.fd_step;
      f(xp, gp);
      f(xm, gm);
      H.col(i) = (gp - gm) / (2 * opt.fd_step);
    }
    H = 0.5 * (H + H.transpose()).eval();
    if (!H.allFinite()) break;

    // Fix lambda when it sits on a bound and the gradient pushes outward.
    const bool lam_active = (x(0) <= 0 && g(0) > 0) || (x(0) >= 1 && g(0) < 0);
    if (lam_active) {
      H.row(0).setZero();
      H.col(0).setZero();
      H(0, 0) = 1;
    }
    Vec rhs = g;
    if (lam_active) rhs(0) = 0;

    Eigen::SelfAdjointEigenSolver<Mat> eig(H);
    Vec ev = eig.eigenvalues();
    const double emax = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
    const double floor = 1e-10 * emax;
    for (int i = 0; i < N; ++i) ev(i) = std::max(ev(i), floor);
    Vec p = -eig.eigenvectors() * (eig.eigenvectors().transpose() * rhs).cwiseQuotient(ev);
    if (lam_active) p(0) = 0;

    double alpha = 1;
    bool accepted = false;
    Vec xn, gn;
    double fn = fx;
    for (int ls = 0; ls < 40; ++ls) {
      xn = x + alpha * p;
      xn(0) = std::clamp(xn(0), 0.0, 1.0);
      fn = f(xn, gn);
      const double decrease = g.dot(xn - x);
      // Near the minimizer f is flat to roundoff; fall back to gradient decrease there.
      const bool flat = fn <= fx + 1e-14 * (1 + std::abs(fx)) && gn.allFinite() &&
                        projected_grad_norm(xn, gn) < projected_grad_norm(x, g);
      if (std::isfinite(fn) && (fn <= fx + 1e-4 * std::min(decrease, 0.0) || flat)) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // No further decrease is representable: stationary up to roundoff.
      r.converged = projected_grad_norm(x, g) < 1e-8;
      break;
    }
    const double step = (xn - x).norm();
    x = xn;
    fx = fn;
    g = gn;
    if (step < opt.step_tol * std::max(1.0, opt.step_scale)) {
      r.converged = true;
      break;
    }
  }
  r.x = x;
  r.value = fx;
  r.grad = g;
  return r;
}

}  // namespace jmm
