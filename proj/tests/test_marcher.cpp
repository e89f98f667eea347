#include <doctest.h>

#include <algorithm>
#include <random>

#include "jmm/errors.hpp"
#include "jmm/marcher.hpp"

using namespace jmm;

TEST_CASE("heap pops in key order with decrease-key") {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> keys(300);
  for (auto& k : keys) k = u(rng);
  NodeHeap heap(keys);
  for (int n = 0; n < 300; ++n) heap.push(n);
  CHECK(heap.verify());
  for (int n = 0; n < 300; n += 3) {
    keys[n] *= 0.5;
    heap.decrease(n);
    REQUIRE(heap.verify());
  }
  std::vector<double> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  for (double expected : sorted) {
    REQUIRE_FALSE(heap.empty());
    const int n = heap.pop();
    CHECK(keys[n] == expected);
    CHECK_FALSE(heap.contains(n));
  }
  CHECK(heap.empty());
}

TEST_CASE("init regions") {
  const auto model = SlownessModel::standard(ModelKind::constant);
  const auto grid = Grid2::square(-1, -1, 2, 201);
  Marcher m(grid, model, MarchOptions{Solver::jmm3, Stencil::eight, InitRegion::disk(0.1)});
  m.initialize();
  const int n = grid.flat(NodeIndex{110, 100});
  CHECK(m.in_init(n));
  CHECK(m.T()[n] == doctest::Approx(0.1));
  CHECK_FALSE(m.in_init(grid.flat(NodeIndex{108, 108})));
  CHECK(m.in_init(m.source_node()));
  CHECK(m.grad()[m.source_node()] == Vec2::Zero());

  const auto g2 = Grid2::square(0, 0, 1, 101);
  const InitRegion slab = InitRegion::slab(0.1);
  CHECK(slab.contains(g2, {57, 10}, {0, 0}));
  CHECK_FALSE(slab.contains(g2, {57, 11}, {0, 0}));
  CHECK(InitRegion::box(0.1).contains(g2, {10, 10}, {0, 0}));
}

TEST_CASE("empty init region is rejected") {
  const auto model = SlownessModel::standard(ModelKind::constant);
  const auto grid = Grid2::square(-1, -1, 2, 10);  // no node near the source
  Marcher m(grid, model, MarchOptions{Solver::jmm1, Stencil::eight, InitRegion::disk(0.01)});
  CHECK_THROWS_AS(m.initialize(), InvalidInput);
}

TEST_CASE("two-node grid terminates") {
  const auto model = SlownessModel::standard(ModelKind::linear2);
  Marcher m(Grid2::square(0, 0, 1, 2), model, MarchOptions{Solver::jmm3, Stencil::eight, InitRegion::disk(0.01)});
  m.run();
  CHECK(m.unreachable() == 0);
}

TEST_CASE("march: every node valid, label-setting order") {
  const auto model = SlownessModel::standard(ModelKind::sine);
  for (auto solver : {Solver::jmm1, Solver::jmm2g, Solver::jmm3, Solver::jmm4, Solver::fmm, Solver::olim8mp0}) {
    const auto grid = Grid2::square(-1, -1, 2, 17);
    Marcher m(grid, model, MarchOptions{solver, Stencil::eight, InitRegion::box(0.2)});
    m.run();
    CAPTURE(to_string(solver));
    CHECK(m.unreachable() == 0);
    CHECK(m.heap_ok());
    const auto& pops = m.pop_values();
    CHECK(pops.size() == grid.num_nodes());
    for (std::size_t k = 1; k < pops.size(); ++k) CHECK(pops[k] >= pops[k - 1] - 1e-12);
  }
}

TEST_CASE("heap order matches a sort of the final values on small grids") {
  const auto model = SlownessModel::standard(ModelKind::linear1);
  const auto grid = Grid2::square(-1, -1, 2, 17);
  Marcher m(grid, model, MarchOptions{Solver::fmm, Stencil::four, InitRegion::box(0.1)});
  m.run();
  std::vector<double> sorted = m.T();
  std::sort(sorted.begin(), sorted.end());
  CHECK(m.pop_values() == sorted);
}

TEST_CASE("constant problem: jet marching is third order") {
  const auto model = SlownessModel::standard(ModelKind::constant);
  double prev = 0;
  for (int M : {33, 65}) {
    const auto grid = Grid2::square(-1, -1, 2, M);
    Marcher m(grid, model, MarchOptions{});
    m.run();
    double e = 0;
    for (int n = 0; n < static_cast<int>(grid.num_nodes()); ++n) e = std::max(e, std::abs(m.T()[n] - grid.point(n).norm()));
    if (prev > 0) CHECK(prev / e > 6);  // ~8 for third order
    prev = e;
  }
}
