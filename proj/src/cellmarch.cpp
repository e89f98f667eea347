#include "jmm/cellmarch.hpp"

namespace jmm {

std::array<double, 4> estimate_txy(const std::array<Vec2, 4>& g, double h) {
  // Corners: 0 = (0,0), 1 = (1,0), 2 = (0,1), 3 = (1,1).
  const double bottom = (g[1].y() - g[0].y()) / h;  // (1/2, 0)
  const double top = (g[3].y() - g[2].y()) / h;     // (1/2, 1)
  const double left = (g[2].x() - g[0].x()) / h;    // (0, 1/2)
  const double right = (g[3].x() - g[1].x()) / h;   // (1, 1/2)
  const double mean = 0.25 * (bottom + top + left + right);
  const double du = right - left;
  const double dv = top - bottom;
  return {mean - 0.5 * du - 0.5 * dv, mean + 0.5 * du - 0.5 * dv, mean - 0.5 * du + 0.5 * dv,
          mean + 0.5 * du + 0.5 * dv};
}

CellStore::CellStore(const Grid2& grid)
    : grid_(grid),
      cells_(grid.num_cells()),
      contributed_(grid.num_cells(), 0),
      txy_(grid.num_nodes(), 0.0),
      txy_sum_(grid.num_nodes(), 0.0),
      count_(grid.num_nodes(), 0),
      fixed_(grid.num_nodes(), 0) {}

void CellStore::set_exact_txy(int node, double txy) {
  fixed_[node] = 1;
  txy_[node] = txy;
}

CellCornerData CellStore::corner_data(CellIndex c, const JetView& jets) const {
  CellCornerData d;
  const auto corners = grid_.corners(c);
  for (int k = 0; k < 4; ++k) {
    const int n = grid_.flat(corners[k]);
    d.T[k] = jets.T[n];
    d.grad[k] = jets.grad[n];
    d.Txy[k] = txy_[n];
  }
  return d;
}

void CellStore::rebuild(CellIndex c, const JetView& jets) {
  cells_[grid_.flat(c)] = BicubicCell(grid_.point(NodeIndex{c.i, c.j}), grid_.h(), corner_data(c, jets));
}

void CellStore::build_exact_cell(CellIndex c, const JetView& jets) { rebuild(c, jets); }

void CellStore::finalize_cell(CellIndex c, const JetView& jets) {
  const int ci = grid_.flat(c);
  const auto corners = grid_.corners(c);
  if (!contributed_[ci]) {
    std::array<Vec2, 4> grads;
    for (int k = 0; k < 4; ++k) grads[k] = jets.grad[grid_.flat(corners[k])];
    const auto est = estimate_txy(grads, grid_.h());
    for (int k = 0; k < 4; ++k) {
      const int n = grid_.flat(corners[k]);
      if (fixed_[n]) continue;
      txy_sum_[n] += est[k];
      count_[n] += 1;
      txy_[n] = txy_sum_[n] / count_[n];
    }
    contributed_[ci] = 1;
  }
  rebuild(c, jets);
  for (const auto& corner : corners)
    for (const auto& other : grid_.incident_cells(corner))
      if (!(other == c) && cells_[grid_.flat(other)].valid()) rebuild(other, jets);
}

void CellStore::on_node_valid(NodeIndex n, const JetView& jets) {
  for (const auto& c : grid_.incident_cells(n)) {
    bool all_valid = true;
    for (const auto& corner : grid_.corners(c)) all_valid = all_valid && jets.valid(grid_.flat(corner));
    if (all_valid) finalize_cell(c, jets);
  }
}

std::optional<Mat2> CellStore::nodal_hessian(NodeIndex n) const {
  Mat2 sum = Mat2::Zero();
  int k = 0;
  const Vec2 x = grid_.point(n);
  for (const auto& c : grid_.incident_cells(n)) {
    const auto& cell = cells_[grid_.flat(c)];
    if (!cell.valid()) continue;
    sum += cell.eval_unchecked(x).hess;
    ++k;
  }
  if (k == 0) return std::nullopt;
  return sum / k;
}

void CellStore::rebuild_all(const JetView& jets) {
  for (std::size_t ci = 0; ci < cells_.size(); ++ci)
    if (cells_[ci].valid()) rebuild(grid_.cell(static_cast<int>(ci)), jets);
}

std::vector<SecondPartials> CellStore::nodal_second_partials() const {
  std::vector<SecondPartials> out(grid_.num_nodes());
  for (std::size_t n = 0; n < out.size(); ++n) {
    if (auto H = nodal_hessian(grid_.node(static_cast<int>(n)))) out[n] = {(*H)(0, 0), (*H)(0, 1), (*H)(1, 1)};
  }
  return out;
}

}  // namespace jmm
