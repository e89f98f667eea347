#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "jmm/cellmarch.hpp"
#include "jmm/grid.hpp"
#include "jmm/heap.hpp"
#include "jmm/jet.hpp"
#include "jmm/slowness.hpp"
#include "jmm/update.hpp"

namespace jmm {

/// Nodes initialized with the exact jet before marching.
struct InitRegion {
  enum class Kind { disk, box, slab };
  Kind kind = Kind::box;
  double r0 = 0.1;  // disk radius or box half-width
  double C = 0.1;   // slab: rows j <= floor(C / h)

  static InitRegion disk(double r) { return {Kind::disk, r, 0.1}; }
  static InitRegion box(double r) { return {Kind::box, r, 0.1}; }
  static InitRegion slab(double C) { return {Kind::slab, 0.1, C}; }

  bool contains(const Grid2& grid, NodeIndex n, const Vec2& source) const;
};

struct MarchOptions {
  Solver solver = Solver::jmm3;
  Stencil stencil = Stencil::eight;
  InitRegion init;
  bool cells = false;      // cell marching (implied by jmm4 and amplitude)
  bool amplitude = false;  // march the geometric spreading J
};

/// Label-setting driver holding all per-node state for one run.
class Marcher {
 public:
  Marcher(const Grid2& grid, const SlownessModel& model, MarchOptions opt);
  Marcher(const Marcher&) = delete;
  Marcher& operator=(const Marcher&) = delete;

  /// Exact jets in the init region; throws InvalidInput if it is empty.
  void initialize();
  void march();
  void run() {
    initialize();
    march();
  }

  const Grid2& grid() const { return grid_; }
  const SlownessModel& model() const { return model_; }
  const MarchOptions& options() const { return opt_; }

  const std::vector<double>& T() const { return T_; }
  const std::vector<Vec2>& grad() const { return grad_; }
  const std::vector<State>& state() const { return state_; }
  JetView view() const { return {T_, grad_, state_}; }

  bool in_init(int n) const { return init_[n] != 0; }
  const std::vector<char>& init_mask() const { return init_; }
  /// Flat index of the source node, or -1 if the source is not a grid node.
  int source_node() const { return source_; }

  const CellStore* cells() const { return cells_.get(); }
  const std::vector<double>& J() const { return J_; }

  /// T values in pop order.
  const std::vector<double>& pop_values() const { return pops_; }
  /// Winning update of each marched (non-init) node; jet solvers only.
  const std::vector<Candidate>& parents() const { return parents_; }

  bool heap_ok() const { return heap_.verify(); }
  std::size_t unreachable() const;

 private:
  struct Proposal {
    double T;
    Vec2 grad;
    Candidate cand;
  };
  std::optional<Proposal> propose(NodeIndex m) const;
  std::optional<double> nodal_laplacian(int n) const;
  void march_spreading(int n);

  Grid2 grid_;
  SlownessModel model_;
  MarchOptions opt_;
  std::vector<double> T_;
  std::vector<Vec2> grad_;
  std::vector<State> state_;
  std::vector<char> init_;
  std::vector<double> exact_lap_;
  std::vector<double> J_;
  std::vector<double> pops_;
  std::vector<Candidate> parents_;
  std::unique_ptr<CellStore> cells_;
  NodeHeap heap_;
  int source_ = -1;
  bool initialized_ = false;
};

}  // namespace jmm
