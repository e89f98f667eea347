#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "jmm/slowness.hpp"

namespace jmm {

/// c = v0 + v^T x for the linear-speed models; throws UnsupportedModel otherwise.
LinearSpeed require_linear_speed(const SlownessModel& model);

/// Data of the winning update needed to march the geometric spreading J.
/// For a line update pass x2 = x1 and J2 = J1.
struct SpreadingInput {
  Vec2 xhat, x1, x2;
  double lam = 0;
  double J1 = 0, J2 = 0;
  std::optional<double> lap1, lap2;  // nodal Laplacians of T, if available
  Vec2 t_lam{0, 0};
  double L = 0;
};

/// J(xhat) = |1 + eps (Lap T(x_lam) - t_lam^T grad s(x_lam))| * ((1 - lam) J1 + lam J2),
/// eps = L (v0 + v^T (xhat + x_lam) / 2). Without both Laplacians the bracket is 1.
double spreading_update(const SpreadingInput& in, const SlownessModel& model);

/// Point-source amplitude e^{i pi/4} / (2 sqrt(2 pi omega)) * sqrt(c(x) / J).
/// Throws SingularityError for J <= 0.
std::complex<double> amplitude_from_spreading(double J, const Vec2& x, const SlownessModel& model,
                                              double omega);

/// U = A exp(i omega T), nodewise.
std::vector<std::complex<double>> helmholtz_field(const std::vector<double>& T,
                                                  const std::vector<std::complex<double>>& A,
                                                  double omega);

}  // namespace jmm
