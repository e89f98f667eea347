#include "jmm/grid.hpp"

#include <cmath>
#include <string>

#include "jmm/errors.hpp"

namespace jmm {

Grid2::Grid2(double xmin, double ymin, int M, double h) : xmin_(xmin), ymin_(ymin), M_(M), h_(h) {
  if (M < 2) throw InvalidInput("grid needs at least 2 nodes per axis, got " + std::to_string(M));
  if (!(h > 0)) throw InvalidInput("grid spacing must be positive");
}

Grid2 Grid2::square(double xmin, double ymin, double extent, int M) {
  if (M < 2) throw InvalidInput("grid needs at least 2 nodes per axis, got " + std::to_string(M));
  return Grid2(xmin, ymin, M, extent / (M - 1));
}

NodeIndex Grid2::nearest(const Vec2& x) const {
  return {static_cast<int>(std::lround((x.x() - xmin_) / h_)),
          static_cast<int>(std::lround((x.y() - ymin_) / h_))};
}

std::vector<NodeIndex> Grid2::neighbors8(NodeIndex n) const {
  std::vector<NodeIndex> out;
  out.reserve(8);
  for (const auto& [di, dj] : kRing8) {
    NodeIndex m{n.i + di, n.j + dj};
    if (contains(m)) out.push_back(m);
  }
  return out;
}

std::vector<NodeIndex> Grid2::neighbors4(NodeIndex n) const {
  std::vector<NodeIndex> out;
  out.reserve(4);
  for (const auto& [di, dj] : kRing4) {
    NodeIndex m{n.i + di, n.j + dj};
    if (contains(m)) out.push_back(m);
  }
  return out;
}

std::vector<std::pair<NodeIndex, NodeIndex>> Grid2::update_triangles(NodeIndex n,
                                                                     Stencil stencil) const {
  std::vector<std::pair<NodeIndex, NodeIndex>> out;
  auto walk = [&](const auto& ring) {
    const auto k = ring.size();
    for (std::size_t r = 0; r < k; ++r) {
      const auto& a = ring[r];
      const auto& b = ring[(r + 1) % k];
      NodeIndex x1{n.i + a[0], n.j + a[1]};
      NodeIndex x2{n.i + b[0], n.j + b[1]};
      if (contains(x1) && contains(x2)) out.emplace_back(x1, x2);
    }
  };
  if (stencil == Stencil::eight)
    walk(kRing8);
  else
    walk(kRing4);
  return out;
}

std::vector<CellIndex> Grid2::incident_cells(NodeIndex n) const {
  std::vector<CellIndex> out;
  out.reserve(4);
  for (int di : {-1, 0})
    for (int dj : {-1, 0}) {
      CellIndex c{n.i + di, n.j + dj};
      if (contains(c)) out.push_back(c);
    }
  return out;
}

}  // namespace jmm
