#pragma once

#include <limits>
#include <optional>
#include <string_view>

#include "jmm/bicubic.hpp"
#include "jmm/cellmarch.hpp"
#include "jmm/curve.hpp"
#include "jmm/grid.hpp"
#include "jmm/jet.hpp"
#include "jmm/newton.hpp"
#include "jmm/slowness.hpp"

namespace jmm {

enum class Solver { jmm1, jmm1g, jmm2, jmm2g, jmm3, jmm3g, jmm4, fmm, olim8mp0 };

std::string_view to_string(Solver solver);
Solver parse_solver(std::string_view key);

/// True for the semi-Lagrangian jet solvers (everything but the first-order baselines).
inline bool is_jet_solver(Solver s) { return s != Solver::fmm && s != Solver::olim8mp0; }

/// Value and gradient at the two base vertices of a triangle update.
struct BaseJet {
  double T1 = 0, T2 = 0;
  Vec2 g1{0, 0}, g2{0, 0};
};

/// Cubic Hermite interpolant of T along [x1, x2] at x_lam.
struct BaseInterp {
  double T = 0;
  double dT = 0;    // d/dlam
  double d2T = 0;   // d^2/dlam^2
  double tangential = 0;  // directional derivative along (x2 - x1)/|x2 - x1|
};

BaseInterp hermite_base(double lam, const BaseJet& base, const Vec2& x1, const Vec2& x2);

/// Unit tangent at x_lam and its lam-derivative.
struct TangentAtBase {
  Vec2 t{0, 0};
  Vec2 dt{0, 0};
};

/// Recovers grad T(x_lam) from the tangential derivative and the eikonal
/// equation, choosing the base normal v with v^T ell > 0. Returns nullopt when
/// the tangential derivative exceeds the slowness.
std::optional<TangentAtBase> recover_normal_gradient(double lam, const BaseJet& base,
                                                     const UpdateGeometry& g,
                                                     const SlownessModel& model);

struct UpdateResult {
  double value = std::numeric_limits<double>::infinity();
  Vec2 grad{0, 0};
  double lam = 0;
  Vec2 t_lam{0, 0};
  Vec2 t_hat{0, 0};
  double L = 0;
  bool converged = false;
  bool rejected = false;  // discriminant failure: contributes no candidate
  int iterations = 0;
};

struct TriangleData {
  Vec2 xhat, x1, x2;
  BaseJet base;
};

/// Warm start for the triangle solvers. theta_hat is the angle of t_hat;
/// graph-form solvers start from b = 0.
struct WarmStart {
  double lam = 0.5;
  std::optional<double> theta_hat;
};

UpdateResult solve_jmm1(const TriangleData& tri, const SlownessModel& model, const WarmStart& ws = {});
UpdateResult solve_jmm1g(const TriangleData& tri, const SlownessModel& model, const WarmStart& ws = {});
UpdateResult solve_jmm2(const TriangleData& tri, const SlownessModel& model, const WarmStart& ws = {});
UpdateResult solve_jmm2g(const TriangleData& tri, const SlownessModel& model, const WarmStart& ws = {});
UpdateResult solve_jmm3(const TriangleData& tri, const SlownessModel& model, const WarmStart& ws = {});
UpdateResult solve_jmm3g(const TriangleData& tri, const SlownessModel& model, const WarmStart& ws = {});
/// t_lam from the gradient of a valid bicubic cell bordering the base; falls
/// back to solve_jmm2 when cell is null.
UpdateResult solve_jmm4(const TriangleData& tri, const SlownessModel& model, const BicubicCell* cell,
                        const WarmStart& ws = {});

UpdateResult solve_triangle(Solver solver, const TriangleData& tri, const SlownessModel& model,
                            const BicubicCell* cell = nullptr, const WarmStart& ws = {});

/// One-point update along the segment x1 -> xhat, Simpson rule for the integral of s.
UpdateResult line_update(const Vec2& x1, double T1, const Vec2& xhat, const SlownessModel& model);

struct Candidate {
  UpdateResult result;
  int x1 = -1;
  int x2 = -1;  // -1 for a line update
};

/// Context for updating one node: grid, jets/states, model and, for jmm4, the cells.
struct UpdateContext {
  const Grid2& grid;
  JetView jets;
  const SlownessModel& model;
  Solver solver;
  Stencil stencil;
  const CellStore* cells = nullptr;
};

/// The valid upwind cell bordering base edge (x1, x2) on the side opposite xhat, if any.
const BicubicCell* upwind_cell(const Grid2& grid, const CellStore& cells, NodeIndex xhat,
                               NodeIndex x1, NodeIndex x2);

/// Bottom-up update of xhat: all valid line updates, then the (at most two)
/// triangle updates on the ring edges incident on the minimizing line vertex.
/// Triangle minimizers on lam in {0, 1} defer to the line update.
std::optional<Candidate> bottom_up(const UpdateContext& ctx, NodeIndex xhat);

/// Exhaustive variant: every valid line and triangle update.
std::optional<Candidate> brute_force(const UpdateContext& ctx, NodeIndex xhat);

}  // namespace jmm
