#include "jmm/amplitude.hpp"

#include <cmath>
#include <numbers>

#include "jmm/errors.hpp"

namespace jmm {

LinearSpeed require_linear_speed(const SlownessModel& model) {
  auto ls = model.linear_speed();
  if (!ls) throw UnsupportedModel("spreading update requires a linear speed of sound");
  return *ls;
}

double spreading_update(const SpreadingInput& in, const SlownessModel& model) {
  const LinearSpeed ls = require_linear_speed(model);
  const Vec2 xlam = (1 - in.lam) * in.x1 + in.lam * in.x2;
  const double Jlam = (1 - in.lam) * in.J1 + in.lam * in.J2;
  if (!in.lap1 || !in.lap2) return Jlam;
  const double lap = (1 - in.lam) * *in.lap1 + in.lam * *in.lap2;
  const double eps = in.L * (ls.v0 + ls.v.dot(0.5 * (in.xhat + xlam)));
  const double trace = lap - in.t_lam.dot(model.grad_s(xlam));
  return std::abs(1 + eps * trace) * Jlam;
}

std::complex<double> amplitude_from_spreading(double J, const Vec2& x, const SlownessModel& model,
                                              double omega) {
  if (!(J > 0)) throw SingularityError("amplitude is singular where J <= 0");
  const std::complex<double> phase = std::polar(1.0, std::numbers::pi / 4);
  return phase / (2 * std::sqrt(2 * std::numbers::pi * omega)) * std::sqrt(model.c(x) / J);
}

std::vector<std::complex<double>> helmholtz_field(const std::vector<double>& T,
                                                  const std::vector<std::complex<double>>& A,
                                                  double omega) {
  if (T.size() != A.size()) throw InvalidInput("helmholtz_field: size mismatch");
  std::vector<std::complex<double>> U(T.size());
  for (std::size_t n = 0; n < T.size(); ++n) U[n] = A[n] * std::polar(1.0, omega * T[n]);
  return U;
}

}  // namespace jmm
