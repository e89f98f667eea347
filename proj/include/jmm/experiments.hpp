#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "jmm/marcher.hpp"

namespace jmm {

/// Standard model and grid for a named test problem.
SlownessModel make_problem(const std::string& name);
Grid2 problem_grid(const SlownessModel& model, int M);

/// RMS errors of the second-order jet for jmm4 runs.
struct JetErrors {
  double Tx = 0, Ty = 0, Txx = 0, Txy = 0, Tyy = 0;
};

struct ErrorReport {
  std::string problem, solver;
  int M = 0;
  double h = 0;
  double emax_T = 0, erms_T = 0;
  double emax_grad = 0, erms_grad = 0;
  std::optional<JetErrors> jet;
  double time_s = 0;
  std::size_t count = 0;  // nodes in the error mask
};

/// Nodes entering the error norms: outside the init region and not the source.
std::vector<char> error_mask(const Marcher& m);

/// Norms of T - tau and |grad T - grad tau| over the masked nodes.
ErrorReport error_norms(const Grid2& grid, const SlownessModel& model, const std::vector<double>& T,
                        const std::vector<Vec2>& grad, const std::vector<char>& mask);

/// error_norms for a finished march, plus 2-jet errors when cells were marched.
ErrorReport error_norms(const Marcher& m);

struct FitResult {
  double p = 0;
  double C = 0;
  double residual = 0;  // RMS residual in log space
  int used = 0;
  int excluded = 0;  // points dropped for E <= 0
};

/// Least-squares fit E = C h^p in log-log space.
FitResult fit_order(const std::vector<std::pair<double, double>>& points);

/// Marches one (problem, solver, size) case and reports its errors.
ErrorReport run_case(const std::string& problem, const MarchOptions& opt, int M);

/// Per-column orders of a convergence table.
struct OrderFits {
  FitResult T, grad;
  std::optional<FitResult> Tx, Ty, Txx, Txy, Tyy;
};

struct ConvergeTable {
  std::vector<ErrorReport> rows;
  std::optional<OrderFits> fits;  // absent with fewer than two sizes
  int fit_first = 0;              // fits use rows [fit_first, fit_last)
  int fit_last = 0;
};

/// Fits RMS orders over rows [first, last).
OrderFits fit_table(const std::vector<ErrorReport>& rows, int first, int last);

/// Runs every size (in parallel, up to worker_count() threads) and fits the RMS orders.
/// Sizes must be strictly increasing. skip_first drops that many of the smallest
/// sizes from the fits.
ConvergeTable converge(const std::string& problem, const MarchOptions& opt,
                       const std::vector<int>& sizes, int skip_first = 0);

/// The linear-speed counterexample with slab initialization, JMM3.
ConvergeTable counterexample_run(Stencil stencil, const std::vector<int>& sizes, double C = 0.1);

struct PointwiseResult {
  int base_size = 0;
  std::vector<int> sizes;
  std::vector<double> order;  // per base-grid node; NaN where undefined
};

/// Per-node least-squares order from error fields sampled on a common base grid.
std::vector<double> pointwise_orders(const std::vector<double>& hs,
                                     const std::vector<std::vector<double>>& errors);

/// Marches each nested size, decimates |T - tau| to the base grid and fits per node.
PointwiseResult pointwise_convergence(const std::string& problem, const MarchOptions& opt,
                                      const std::vector<int>& sizes, int base_size = 129);

/// Threads used by the harness: hardware concurrency capped by JMM_THREADS.
int worker_count();

void write_csv(std::ostream& os, const std::vector<ErrorReport>& rows);
void write_json(std::ostream& os, const ConvergeTable& table);

enum class DumpFormat { csv, json, bin };
DumpFormat parse_dump_format(const std::string& s);

/// Named nodal fields of a finished march.
struct FieldSet {
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;
};

/// T, grad components and, with amplitude marching, J, |A| and Re U at frequency omega.
FieldSet collect_fields(const Marcher& m, double omega);

/// Writes `path`.bin (row-major little-endian float64, fields back to back) with a
/// `path`.json sidecar, or `path`.csv with one row per node. json writes only the sidecar
/// with the fields inlined.
void field_dump(const Marcher& m, const std::string& problem, const FieldSet& fields,
                const std::string& path, DumpFormat format);

}  // namespace jmm
