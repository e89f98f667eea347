// jmm: run jet marching experiments from the command line.
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "jmm/amplitude.hpp"
#include "jmm/errors.hpp"
#include "jmm/experiments.hpp"

using namespace jmm;

namespace {

struct Common {
  std::string problem = "constant";
  std::string solver = "jmm3";
  std::string stencil = "eight";
  std::string init_kind = "box";
  double init_radius = 0.1;
  double slab_c = 0.1;
  std::string out;
  std::string format = "csv";
  double omega = 100;
};

void add_model_flags(CLI::App* app, Common& c) {
  app->add_option("--problem", c.problem, "constant, linear1, linear2, sine, sloth, counterexample")
      ->capture_default_str();
  app->add_option("--solver", c.solver, "jmm1, jmm1g, jmm2, jmm2g, jmm3, jmm3g, jmm4, fmm, olim8mp0")
      ->capture_default_str();
  app->add_option("--stencil", c.stencil, "four or eight")->capture_default_str();
  app->add_option("--init", c.init_kind, "init region: disk, box or slab")->capture_default_str();
  app->add_option("--init-radius", c.init_radius, "disk radius or box half-width")->capture_default_str();
  app->add_option("--slab-c", c.slab_c, "slab init: rows j <= floor(C/h)")->capture_default_str();
}

Stencil parse_stencil(const std::string& s) {
  if (s == "eight" || s == "8") return Stencil::eight;
  if (s == "four" || s == "4") return Stencil::four;
  throw InvalidInput("unknown stencil '" + s + "'");
}

MarchOptions march_options(const Common& c) {
  MarchOptions opt;
  opt.solver = parse_solver(c.solver);
  opt.stencil = parse_stencil(c.stencil);
  if (c.init_kind == "disk") opt.init = InitRegion::disk(c.init_radius);
  else if (c.init_kind == "box") opt.init = InitRegion::box(c.init_radius);
  else if (c.init_kind == "slab") opt.init = InitRegion::slab(c.slab_c);
  else throw InvalidInput("unknown init region '" + c.init_kind + "'");
  return opt;
}

void emit_table(const ConvergeTable& t, const Common& c) {
  if (c.out.empty()) {
    write_csv(std::cout, t.rows);
    if (t.fits)
      std::cerr << "fitted RMS orders: T " << t.fits->T.p << ", gradT " << t.fits->grad.p << '\n';
    else
      std::cerr << "fit skipped: fewer than two sizes\n";
    return;
  }
  std::ofstream csv(c.out + ".csv");
  std::ofstream js(c.out + ".json");
  if (!csv || !js) throw std::runtime_error("cannot write to '" + c.out + "'");
  write_csv(csv, t.rows);
  write_json(js, t);
}

int run(int argc, char** argv) {
  CLI::App app{"Jet marching methods for the eikonal equation"};
  app.require_subcommand(1);
  Common c;
  int size = 129;
  std::vector<int> sizes = {33, 65, 129, 257, 513};
  int skip = 0;
  int base = 129;

  auto* solve = app.add_subcommand("solve", "march one grid, report errors, optionally dump fields");
  add_model_flags(solve, c);
  solve->add_option("--size", size, "nodes per axis")->capture_default_str();
  solve->add_option("--out", c.out, "field dump path prefix");
  solve->add_option("--format", c.format, "csv, json or bin")->capture_default_str();

  auto* conv = app.add_subcommand("converge", "convergence study over a size ladder");
  add_model_flags(conv, c);
  conv->add_option("--sizes", sizes, "strictly increasing sizes")->delimiter(',');
  conv->add_option("--skip", skip, "smallest sizes left out of the fits")->capture_default_str();
  conv->add_option("--out", c.out, "writes <out>.csv and <out>.json");

  auto* cex = app.add_subcommand("counterexample", "4- vs 8-point stencil with slab init, JMM3");
  cex->add_option("--sizes", sizes, "strictly increasing sizes")->delimiter(',');
  cex->add_option("--slab-c", c.slab_c, "slab init: rows j <= floor(C/h)")->capture_default_str();
  cex->add_option("--out", c.out, "writes <out>_<stencil>.csv/.json");

  auto* pw = app.add_subcommand("pointwise", "per-node orders on a decimated base grid");
  add_model_flags(pw, c);
  pw->add_option("--sizes", sizes, "nested sizes, (base-1) divides (M-1)")->delimiter(',');
  pw->add_option("--base", base, "base grid size")->capture_default_str();
  pw->add_option("--out", c.out, "order field dump path prefix");
  pw->add_option("--format", c.format, "csv, json or bin")->capture_default_str();

  auto* amp = app.add_subcommand("amplitude", "march T and geometric spreading J; dump J, |A|, Re U");
  add_model_flags(amp, c);
  amp->add_option("--size", size, "nodes per axis")->capture_default_str();
  amp->add_option("--omega", c.omega, "frequency")->capture_default_str();
  amp->add_option("--out", c.out, "field dump path prefix");
  amp->add_option("--format", c.format, "csv, json or bin")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*solve) {
    const MarchOptions opt = march_options(c);
    const SlownessModel model = make_problem(c.problem);
    const Grid2 grid = problem_grid(model, size);
    Marcher m(grid, model, opt);
    const auto t0 = std::chrono::steady_clock::now();
    m.run();
    ErrorReport r = error_norms(m);
    r.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.problem = c.problem;
    write_csv(std::cout, {r});
    if (!c.out.empty()) field_dump(m, c.problem, collect_fields(m, c.omega), c.out, parse_dump_format(c.format));
  } else if (*conv) {
    emit_table(converge(c.problem, march_options(c), sizes, skip), c);
  } else if (*cex) {
    const std::string out = c.out;
    for (auto [name, st] : {std::pair{"four", Stencil::four}, std::pair{"eight", Stencil::eight}}) {
      auto t = counterexample_run(st, sizes, c.slab_c);
      if (!out.empty()) c.out = out + "_" + name;
      std::cerr << name << "-point stencil:\n";
      emit_table(t, c);
    }
  } else if (*pw) {
    const auto res = pointwise_convergence(c.problem, march_options(c), sizes, base);
    std::vector<double> finite;
    for (double p : res.order)
      if (std::isfinite(p)) finite.push_back(p);
    if (!finite.empty()) {
      std::nth_element(finite.begin(), finite.begin() + finite.size() / 2, finite.end());
      std::cout << "median pointwise T order: " << finite[finite.size() / 2] << " over " << finite.size()
                << " nodes\n";
    }
    if (!c.out.empty()) {
      const SlownessModel model = make_problem(c.problem);
      const Grid2 grid = problem_grid(model, base);
      std::ofstream os;
      const auto fmt = parse_dump_format(c.format);
      nlohmann::json meta = {{"problem", c.problem}, {"solver", c.solver}, {"M", base},
                             {"h", grid.h()}, {"sizes", res.sizes}, {"fields", {"order"}}};
      if (fmt == DumpFormat::bin) {
        std::ofstream bin(c.out + ".bin", std::ios::binary);
        for (double p : res.order) bin.write(reinterpret_cast<const char*>(&p), 8);
        meta["binary"] = c.out + ".bin";
        meta["dtype"] = "float64 little-endian";
      } else if (fmt == DumpFormat::csv) {
        std::ofstream csv(c.out + ".csv");
        csv << "i,j,order\n";
        for (int n = 0; n < static_cast<int>(res.order.size()); ++n)
          csv << grid.node(n).i << ',' << grid.node(n).j << ',' << res.order[n] << '\n';
        return 0;
      } else {
        std::vector<nlohmann::json> vals;
        for (double p : res.order) vals.push_back(std::isfinite(p) ? nlohmann::json(p) : nlohmann::json(nullptr));
        meta["data"] = {{"order", vals}};
      }
      std::ofstream(c.out + ".json") << meta.dump(2) << '\n';
    }
  } else if (*amp) {
    MarchOptions opt = march_options(c);
    opt.amplitude = true;
    const SlownessModel model = make_problem(c.problem);
    const Grid2 grid = problem_grid(model, size);
    Marcher m(grid, model, opt);
    const auto t0 = std::chrono::steady_clock::now();
    m.run();
    ErrorReport r = error_norms(m);
    r.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.problem = c.problem;
    write_csv(std::cout, {r});
    if (!c.out.empty()) field_dump(m, c.problem, collect_fields(m, c.omega), c.out, parse_dump_format(c.format));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
