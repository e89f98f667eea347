#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "jmm/errors.hpp"
#include "jmm/experiments.hpp"

using namespace jmm;

TEST_CASE("fit_order") {
  auto f = fit_order({{1, 1}, {0.5, 0.25}, {0.25, 0.0625}});
  CHECK(f.p == doctest::Approx(2));
  CHECK(f.C == doctest::Approx(1));
  auto g = fit_order({{0.1, 3e-3}, {0.05, 3 * std::pow(0.05, 3)}, {0.025, 3 * std::pow(0.025, 3)}});
  CHECK(g.p == doctest::Approx(3));
  CHECK(g.C == doctest::Approx(3));
  auto z = fit_order({{1, 1}, {0.5, 0}, {0.25, 0.0625}});
  CHECK(z.excluded == 1);
  CHECK(z.p == doctest::Approx(2));
  CHECK_THROWS_AS(fit_order({{1, 1}, {0.5, 0}}), InvalidInput);
}

TEST_CASE("error norms") {
  const auto model = make_problem("constant");
  const auto grid = problem_grid(model, 5);
  std::vector<double> T(grid.num_nodes());
  std::vector<Vec2> G(grid.num_nodes());
  std::vector<char> mask(grid.num_nodes(), 1);
  for (int n = 0; n < static_cast<int>(T.size()); ++n) {
    T[n] = model.tau(grid.point(n));
    G[n] = grid.point(n).norm() > 0 ? model.grad_tau(grid.point(n)) : Vec2::Zero();
  }
  mask[12] = 0;  // source
  auto exact = error_norms(grid, model, T, G, mask);
  CHECK(exact.emax_T == 0);
  CHECK(exact.erms_grad == 0);
  T[3] += 0.5;
  auto r = error_norms(grid, model, T, G, mask);
  CHECK(r.emax_T == doctest::Approx(0.5));
  CHECK(r.erms_T == doctest::Approx(0.5 / std::sqrt(24.0)));
  CHECK(r.emax_T >= r.erms_T);
}

TEST_CASE("masked init nodes do not affect reports") {
  const auto model = make_problem("linear1");
  const auto grid = problem_grid(model, 33);
  Marcher m(grid, model, MarchOptions{Solver::jmm2, Stencil::eight, InitRegion::box(0.2)});
  m.run();
  const auto mask = error_mask(m);
  auto T = m.T();
  for (int n = 0; n < static_cast<int>(T.size()); ++n)
    if (m.in_init(n)) T[n] += 1.0;
  const auto a = error_norms(grid, model, m.T(), m.grad(), mask);
  const auto b = error_norms(grid, model, T, m.grad(), mask);
  CHECK(a.emax_T == b.emax_T);
  CHECK(a.erms_T == b.erms_T);
  CHECK(mask[m.source_node()] == 0);
}

TEST_CASE("converge table and CSV") {
  MarchOptions opt;
  opt.solver = Solver::jmm1;
  const auto t = converge("constant", opt, {17, 33});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].M == 17);
  REQUIRE(t.fits);
  std::ostringstream os;
  write_csv(os, t.rows);
  CHECK(os.str().rfind("problem,solver,M,h,Emax_T,Erms_T,Emax_gradT,Erms_gradT,time_s\n", 0) == 0);
  std::ostringstream js;
  write_json(js, t);
  const auto j = nlohmann::json::parse(js.str());
  CHECK(j["rows"].size() == 2);
  CHECK(j["fits"]["Erms_T"]["p"].get<double>() > 2);

  const auto one = converge("constant", opt, {17});
  CHECK_FALSE(one.fits);
  CHECK_THROWS_AS(converge("constant", opt, {33, 17}), InvalidInput);
  CHECK_THROWS_AS(converge("nope", opt, {17}), InvalidInput);
}

TEST_CASE("CSV output is deterministic apart from timings") {
  auto strip = [](const std::vector<ErrorReport>& rows) {
    auto copy = rows;
    for (auto& r : copy) r.time_s = 0;
    std::ostringstream os;
    write_csv(os, copy);
    return os.str();
  };
  MarchOptions opt;
  opt.solver = Solver::jmm4;
  const auto a = converge("sloth", opt, {17, 33}), b = converge("sloth", opt, {17, 33});
  CHECK(strip(a.rows) == strip(b.rows));
  CHECK(strip(a.rows).find("Erms_Txx") != std::string::npos);
}

TEST_CASE("counterexample slab nodes are exact") {
  const auto model = make_problem("counterexample");
  const auto grid = problem_grid(model, 33);
  MarchOptions opt;
  opt.init = InitRegion::slab(0.1);
  Marcher m(grid, model, opt);
  m.run();
  for (int n = 0; n < static_cast<int>(grid.num_nodes()); ++n)
    if (m.in_init(n)) CHECK(m.T()[n] == model.tau(grid.point(n)));
}

TEST_CASE("pointwise orders") {
  const std::vector<double> hs = {0.1, 0.05, 0.025};
  std::vector<std::vector<double>> e(3, std::vector<double>(4));
  for (int k = 0; k < 3; ++k)
    for (int n = 0; n < 4; ++n) e[k][n] = (n + 1) * hs[k] * hs[k];
  e[0][3] = 0;
  const auto p = pointwise_orders(hs, e);
  for (int n = 0; n < 3; ++n) CHECK(p[n] == doctest::Approx(2));
  CHECK(std::isnan(p[3]));

  MarchOptions opt;
  CHECK_THROWS_AS(pointwise_convergence("constant", opt, {17, 40}, 17), InvalidInput);
  CHECK_THROWS_AS(pointwise_convergence("constant", opt, {17, 49}, 17), InvalidInput);
  const auto r = pointwise_convergence("constant", opt, {17, 33, 65}, 17);
  CHECK(r.order.size() == 17u * 17u);
}

TEST_CASE("field dumps") {
  const auto model = make_problem("constant");
  const auto grid = problem_grid(model, 17);
  MarchOptions opt;
  opt.amplitude = true;
  Marcher m(grid, model, opt);
  m.run();
  const auto fields = collect_fields(m, 100);
  CHECK(fields.names.size() == 6);
  const auto dir = std::filesystem::temp_directory_path() / "jmm_test_dump";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "field").string();

  field_dump(m, "constant", fields, path, DumpFormat::csv);
  std::ifstream csv(path + ".csv");
  int lines = 0;
  for (std::string line; std::getline(csv, line);) ++lines;
  CHECK(lines == 17 * 17 + 1);

  field_dump(m, "constant", fields, path, DumpFormat::bin);
  CHECK(std::filesystem::file_size(path + ".bin") == 8u * 17 * 17 * fields.names.size());
  const auto meta = nlohmann::json::parse(std::ifstream(path + ".json"));
  CHECK(meta["problem"] == "constant");
  CHECK(meta["solver"] == "jmm3");
  CHECK(meta["M"] == 17);
  CHECK(meta["h"].get<double>() == doctest::Approx(0.125));
  CHECK(meta["init_region"]["kind"] == "box");

  field_dump(m, "constant", fields, path, DumpFormat::json);
  const auto inl = nlohmann::json::parse(std::ifstream(path + ".json"));
  CHECK(inl["data"]["T"].size() == 17u * 17u);
  CHECK_THROWS(field_dump(m, "constant", fields, "/nonexistent/dir/x", DumpFormat::bin));
  std::filesystem::remove_all(dir);
}

TEST_CASE("worker count honours JMM_THREADS") {
  setenv("JMM_THREADS", "1", 1);
  CHECK(worker_count() == 1);
  unsetenv("JMM_THREADS");
  CHECK(worker_count() >= 1);
}
