#include "jmm/marcher.hpp"

#include <cmath>
#include <limits>

#include "jmm/amplitude.hpp"
#include "jmm/baseline.hpp"
#include "jmm/errors.hpp"

namespace jmm {

bool InitRegion::contains(const Grid2& grid, NodeIndex n, const Vec2& source) const {
  const double tol = 1e-10 * grid.h();
  const Vec2 d = grid.point(n) - source;
  switch (kind) {
    case Kind::disk: return d.norm() <= r0 + tol;
    case Kind::box: return d.cwiseAbs().maxCoeff() <= r0 + tol;
    case Kind::slab: return n.j <= static_cast<int>(std::floor(C / grid.h() + 1e-10));
  }
  return false;
}

Marcher::Marcher(const Grid2& grid, const SlownessModel& model, MarchOptions opt)
    : grid_(grid),
      model_(model),
      opt_(opt),
      T_(grid.num_nodes(), std::numeric_limits<double>::infinity()),
      grad_(grid.num_nodes(), Vec2::Zero()),
      state_(grid.num_nodes(), State::far),
      init_(grid.num_nodes(), 0),
      heap_(T_) {
  if (opt_.solver == Solver::jmm4 || opt_.amplitude) opt_.cells = true;
  if (opt_.amplitude) {
    if (!is_jet_solver(opt_.solver)) throw InvalidInput("amplitude marching needs a jet solver");
    require_linear_speed(model_);
  }
  if (opt_.cells) cells_ = std::make_unique<CellStore>(grid_);
  if (is_jet_solver(opt_.solver)) parents_.resize(grid.num_nodes());
  const NodeIndex s = grid_.nearest(model_.source());
  if (grid_.contains(s) && (grid_.point(s) - model_.source()).norm() <= 1e-10 * grid_.h())
    source_ = grid_.flat(s);
}

void Marcher::initialize() {
  if (initialized_) throw InvalidInput("Marcher::initialize called twice");
  const int N = static_cast<int>(grid_.num_nodes());
  if (opt_.amplitude) {
    J_.assign(N, 0.0);
    exact_lap_.assign(N, 0.0);
  }
  int count = 0;
  for (int n = 0; n < N; ++n) {
    const NodeIndex node = grid_.node(n);
    if (!opt_.init.contains(grid_, node, model_.source())) continue;
    const Vec2 x = grid_.point(n);
    init_[n] = 1;
    T_[n] = model_.tau(x);
    grad_[n] = n == source_ ? Vec2::Zero() : model_.grad_tau(x);
    Mat2 H = Mat2::Zero();
    if (n != source_ && (cells_ || opt_.amplitude)) H = model_.hess_tau(x);
    if (cells_) cells_->set_exact_txy(n, H(0, 1));
    if (opt_.amplitude) {
      J_[n] = (x - model_.source()).norm();
      exact_lap_[n] = H.trace();
    }
    state_[n] = State::trial;
    heap_.push(n);
    ++count;
  }
  if (count == 0) throw InvalidInput("initialization region contains no grid nodes");
  if (cells_) {
    const JetView jets = view();
    for (int c = 0; c < static_cast<int>(grid_.num_cells()); ++c) {
      const CellIndex ci = grid_.cell(c);
      bool all = true;
      for (const auto& k : grid_.corners(ci)) all = all && init_[grid_.flat(k)];
      if (all) cells_->build_exact_cell(ci, jets);
    }
  }
  initialized_ = true;
}

std::optional<Marcher::Proposal> Marcher::propose(NodeIndex m) const {
  const JetView jets = view();
  switch (opt_.solver) {
    case Solver::fmm: {
      auto u = fmm_update(grid_, jets, model_, m);
      if (!u) return std::nullopt;
      return Proposal{u->T, u->grad, {}};
    }
    case Solver::olim8mp0: {
      auto u = olim8_mp0_update(grid_, jets, model_, m);
      if (!u) return std::nullopt;
      return Proposal{u->T, u->grad, {}};
    }
    default: {
      UpdateContext ctx{grid_, jets, model_, opt_.solver, opt_.stencil, cells_.get()};
      auto c = bottom_up(ctx, m);
      if (!c) return std::nullopt;
      return Proposal{c->result.value, c->result.grad, *c};
    }
  }
}

std::optional<double> Marcher::nodal_laplacian(int n) const {
  if (init_[n]) return exact_lap_[n];
  if (auto H = cells_->nodal_hessian(grid_.node(n))) return H->trace();
  return std::nullopt;
}

void Marcher::march_spreading(int n) {
  const Candidate& c = parents_[n];
  SpreadingInput in;
  in.xhat = grid_.point(n);
  in.x1 = grid_.point(c.x1);
  in.x2 = c.x2 >= 0 ? grid_.point(c.x2) : in.x1;
  in.lam = c.x2 >= 0 ? c.result.lam : 0.0;
  in.J1 = J_[c.x1];
  in.J2 = c.x2 >= 0 ? J_[c.x2] : in.J1;
  in.lap1 = nodal_laplacian(c.x1);
  in.lap2 = c.x2 >= 0 ? nodal_laplacian(c.x2) : in.lap1;
  in.t_lam = c.result.t_lam;
  in.L = c.result.L;
  J_[n] = spreading_update(in, model_);
}

void Marcher::march() {
  if (!initialized_) initialize();
  const Stencil nb_stencil = opt_.solver == Solver::fmm        ? Stencil::four
                             : opt_.solver == Solver::olim8mp0 ? Stencil::eight
                                                               : opt_.stencil;
  pops_.reserve(grid_.num_nodes());
  while (!heap_.empty()) {
    const int n = heap_.pop();
    state_[n] = State::valid;
    pops_.push_back(T_[n]);
    const NodeIndex node = grid_.node(n);
    if (cells_) cells_->on_node_valid(node, view());
    if (opt_.amplitude && !init_[n]) march_spreading(n);

    for (const auto& m : grid_.neighbors(node, nb_stencil)) {
      const int im = grid_.flat(m);
      if (state_[im] == State::valid || init_[im]) continue;
      auto p = propose(m);
      if (!p) continue;
      if (state_[im] == State::far) {
        state_[im] = State::trial;
        T_[im] = p->T;
        grad_[im] = p->grad;
        if (!parents_.empty()) parents_[im] = p->cand;
        heap_.push(im);
      } else if (p->T < T_[im]) {
        T_[im] = p->T;
        grad_[im] = p->grad;
        if (!parents_.empty()) parents_[im] = p->cand;
        heap_.decrease(im);
      }
    }
  }
  if (cells_) cells_->rebuild_all(view());
}

std::size_t Marcher::unreachable() const {
  std::size_t k = 0;
  for (auto s : state_) k += s != State::valid;
  return k;
}

}  // namespace jmm
