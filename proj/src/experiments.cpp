#include "jmm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "jmm/amplitude.hpp"
#include "jmm/errors.hpp"

namespace jmm {

using nlohmann::json;

SlownessModel make_problem(const std::string& name) {
  return SlownessModel::standard(parse_model_kind(name));
}

Grid2 problem_grid(const SlownessModel& model, int M) {
  const Domain& d = model.domain();
  return Grid2::square(d.lo.x(), d.lo.y(), d.extent, M);
}

std::vector<char> error_mask(const Marcher& m) {
  std::vector<char> mask(m.grid().num_nodes(), 1);
  for (std::size_t n = 0; n < mask.size(); ++n)
    if (m.in_init(static_cast<int>(n))) mask[n] = 0;
  if (m.source_node() >= 0) mask[m.source_node()] = 0;
  return mask;
}

ErrorReport error_norms(const Grid2& grid, const SlownessModel& model, const std::vector<double>& T,
                        const std::vector<Vec2>& grad, const std::vector<char>& mask) {
  ErrorReport r;
  r.M = grid.size();
  r.h = grid.h();
  double sT = 0, sG = 0;
  for (std::size_t n = 0; n < mask.size(); ++n) {
    if (!mask[n]) continue;
    const Vec2 x = grid.point(static_cast<int>(n));
    const double eT = std::abs(T[n] - model.tau(x));
    const double eG = (grad[n] - model.grad_tau(x)).norm();
    r.emax_T = std::max(r.emax_T, eT);
    r.emax_grad = std::max(r.emax_grad, eG);
    sT += eT * eT;
    sG += eG * eG;
    ++r.count;
  }
  if (r.count > 0) {
    r.erms_T = std::sqrt(sT / r.count);
    r.erms_grad = std::sqrt(sG / r.count);
  }
  return r;
}

ErrorReport error_norms(const Marcher& m) {
  const auto mask = error_mask(m);
  ErrorReport r = error_norms(m.grid(), m.model(), m.T(), m.grad(), mask);
  r.solver = std::string(to_string(m.options().solver));
  r.problem = std::string(to_string(m.model().kind()));
  if (m.cells() && r.count > 0) {
    const auto sp = m.cells()->nodal_second_partials();
    double s[5] = {0, 0, 0, 0, 0};
    for (std::size_t n = 0; n < mask.size(); ++n) {
      if (!mask[n]) continue;
      const Vec2 x = m.grid().point(static_cast<int>(n));
      const Vec2 g = m.model().grad_tau(x);
      const Mat2 H = m.model().hess_tau(x);
      const double e[5] = {m.grad()[n].x() - g.x(), m.grad()[n].y() - g.y(), sp[n].Txx - H(0, 0),
                           sp[n].Txy - H(0, 1), sp[n].Tyy - H(1, 1)};
      for (int k = 0; k < 5; ++k) s[k] += e[k] * e[k];
    }
    const double c = static_cast<double>(r.count);
    r.jet = JetErrors{std::sqrt(s[0] / c), std::sqrt(s[1] / c), std::sqrt(s[2] / c),
                      std::sqrt(s[3] / c), std::sqrt(s[4] / c)};
  }
  return r;
}

FitResult fit_order(const std::vector<std::pair<double, double>>& points) {
  FitResult f;
  std::vector<std::pair<double, double>> logs;
  for (const auto& [h, E] : points) {
    if (!(E > 0) || !(h > 0)) {
      ++f.excluded;
      continue;
    }
    logs.emplace_back(std::log(h), std::log(E));
  }
  f.used = static_cast<int>(logs.size());
  if (f.used < 2) throw InvalidInput("fit_order: fewer than two points with positive error");
  double mx = 0, my = 0;
  for (const auto& [x, y] : logs) mx += x, my += y;
  mx /= f.used;
  my /= f.used;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : logs) sxx += (x - mx) * (x - mx), sxy += (x - mx) * (y - my);
  if (!(sxx > 0)) throw InvalidInput("fit_order: all h values coincide");
  f.p = sxy / sxx;
  const double logC = my - f.p * mx;
  f.C = std::exp(logC);
  double res = 0;
  for (const auto& [x, y] : logs) res += std::pow(y - (logC + f.p * x), 2);
  f.residual = std::sqrt(res / f.used);
  return f;
}

ErrorReport run_case(const std::string& problem, const MarchOptions& opt, int M) {
  const SlownessModel model = make_problem(problem);
  const Grid2 grid = problem_grid(model, M);
  const auto t0 = std::chrono::steady_clock::now();
  Marcher m(grid, model, opt);
  m.run();
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ErrorReport r = error_norms(m);
  r.problem = problem;
  r.time_s = dt;
  return r;
}

int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("JMM_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return n;
}

namespace {

/// Runs fn(k) for k in [0, count) on up to worker_count() threads.
template <class Fn>
void parallel_for(int count, Fn&& fn) {
  const int workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (int k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int k; (k = next.fetch_add(1)) < count;) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

template <class Get>
FitResult fit_column(const std::vector<ErrorReport>& rows, int first, int last, Get get) {
  std::vector<std::pair<double, double>> pts;
  for (int k = first; k < last; ++k) pts.emplace_back(rows[k].h, get(rows[k]));
  return fit_order(pts);
}

}  // namespace

OrderFits fit_table(const std::vector<ErrorReport>& rows, int first, int last) {
  OrderFits f;
  f.T = fit_column(rows, first, last, [](const ErrorReport& r) { return r.erms_T; });
  f.grad = fit_column(rows, first, last, [](const ErrorReport& r) { return r.erms_grad; });
  if (rows[first].jet) {
    f.Tx = fit_column(rows, first, last, [](const ErrorReport& r) { return r.jet->Tx; });
    f.Ty = fit_column(rows, first, last, [](const ErrorReport& r) { return r.jet->Ty; });
    f.Txx = fit_column(rows, first, last, [](const ErrorReport& r) { return r.jet->Txx; });
    f.Txy = fit_column(rows, first, last, [](const ErrorReport& r) { return r.jet->Txy; });
    f.Tyy = fit_column(rows, first, last, [](const ErrorReport& r) { return r.jet->Tyy; });
  }
  return f;
}

ConvergeTable converge(const std::string& problem, const MarchOptions& opt,
                       const std::vector<int>& sizes, int skip_first) {
  if (sizes.empty()) throw InvalidInput("converge: no sizes given");
  for (std::size_t k = 1; k < sizes.size(); ++k)
    if (sizes[k] <= sizes[k - 1]) throw InvalidInput("converge: sizes must be strictly increasing");
  make_problem(problem);  // validate the name before spawning work

  ConvergeTable table;
  table.rows.resize(sizes.size());
  // Largest sizes first so the slowest runs start early.
  const int n = static_cast<int>(sizes.size());
  parallel_for(n, [&](int k) { table.rows[n - 1 - k] = run_case(problem, opt, sizes[n - 1 - k]); });

  table.fit_first = std::clamp(skip_first, 0, n);
  table.fit_last = n;
  if (table.fit_last - table.fit_first >= 2) table.fits = fit_table(table.rows, table.fit_first, table.fit_last);
  return table;
}

ConvergeTable counterexample_run(Stencil stencil, const std::vector<int>& sizes, double C) {
  MarchOptions opt;
  opt.solver = Solver::jmm3;
  opt.stencil = stencil;
  opt.init = InitRegion::slab(C);
  return converge("counterexample", opt, sizes);
}

std::vector<double> pointwise_orders(const std::vector<double>& hs,
                                     const std::vector<std::vector<double>>& errors) {
  if (hs.size() != errors.size() || hs.size() < 2) throw InvalidInput("pointwise_orders: need >= 2 levels");
  const std::size_t N = errors.front().size();
  std::vector<double> order(N, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::pair<double, double>> pts(hs.size());
  for (std::size_t n = 0; n < N; ++n) {
    bool ok = true;
    for (std::size_t k = 0; k < hs.size(); ++k) {
      pts[k] = {hs[k], errors[k][n]};
      ok = ok && errors[k][n] > 0 && std::isfinite(errors[k][n]);
    }
    if (ok) order[n] = fit_order(pts).p;
  }
  return order;
}

PointwiseResult pointwise_convergence(const std::string& problem, const MarchOptions& opt,
                                      const std::vector<int>& sizes, int base_size) {
  if (sizes.size() < 2) throw InvalidInput("pointwise: need at least two sizes");
  for (int M : sizes) {
    const int ratio = (M - 1) / (base_size - 1);
    if (M < base_size || (M - 1) % (base_size - 1) != 0 || !std::has_single_bit(static_cast<unsigned>(ratio)))
      throw InvalidInput("pointwise: size " + std::to_string(M) + " is not nested in base " +
                         std::to_string(base_size));
  }
  const SlownessModel model = make_problem(problem);
  const Grid2 base = problem_grid(model, base_size);
  PointwiseResult out;
  out.base_size = base_size;
  out.sizes = sizes;
  std::vector<std::vector<double>> errors(sizes.size());
  std::vector<double> hs(sizes.size());
  parallel_for(static_cast<int>(sizes.size()), [&](int k) {
    const Grid2 grid = problem_grid(model, sizes[k]);
    Marcher m(grid, model, opt);
    m.run();
    const auto mask = error_mask(m);
    const int stride = (sizes[k] - 1) / (base_size - 1);
    std::vector<double> e(base.num_nodes(), std::numeric_limits<double>::quiet_NaN());
    for (int i = 0; i < base_size; ++i)
      for (int j = 0; j < base_size; ++j) {
        const int n = grid.flat(NodeIndex{i * stride, j * stride});
        if (mask[n]) e[base.flat(NodeIndex{i, j})] = std::abs(m.T()[n] - model.tau(grid.point(n)));
      }
    errors[k] = std::move(e);
    hs[k] = grid.h();
  });
  out.order = pointwise_orders(hs, errors);
  return out;
}

void write_csv(std::ostream& os, const std::vector<ErrorReport>& rows) {
  const bool jet = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.jet.has_value(); });
  os << "problem,solver,M,h,Emax_T,Erms_T,Emax_gradT,Erms_gradT,time_s";
  if (jet) os << ",Erms_Tx,Erms_Ty,Erms_Txx,Erms_Txy,Erms_Tyy";
  os << '\n';
  os << std::setprecision(17);
  for (const auto& r : rows) {
    os << r.problem << ',' << r.solver << ',' << r.M << ',' << r.h << ',' << r.emax_T << ','
       << r.erms_T << ',' << r.emax_grad << ',' << r.erms_grad << ',' << std::setprecision(6)
       << r.time_s << std::setprecision(17);
    if (jet) {
      const JetErrors e = r.jet.value_or(JetErrors{});
      os << ',' << e.Tx << ',' << e.Ty << ',' << e.Txx << ',' << e.Txy << ',' << e.Tyy;
    }
    os << '\n';
  }
}

namespace {

json fit_json(const FitResult& f) {
  return {{"p", f.p}, {"C", f.C}, {"residual", f.residual}, {"used", f.used}, {"excluded", f.excluded}};
}

json report_json(const ErrorReport& r) {
  json j = {{"problem", r.problem}, {"solver", r.solver},     {"M", r.M},
            {"h", r.h},             {"Emax_T", r.emax_T},     {"Erms_T", r.erms_T},
            {"Emax_gradT", r.emax_grad}, {"Erms_gradT", r.erms_grad}, {"time_s", r.time_s}};
  if (r.jet)
    j["jet"] = {{"Erms_Tx", r.jet->Tx},   {"Erms_Ty", r.jet->Ty}, {"Erms_Txx", r.jet->Txx},
                {"Erms_Txy", r.jet->Txy}, {"Erms_Tyy", r.jet->Tyy}};
  return j;
}

}  // namespace

void write_json(std::ostream& os, const ConvergeTable& table) {
  json j;
  j["rows"] = json::array();
  for (const auto& r : table.rows) j["rows"].push_back(report_json(r));
  if (table.fits) {
    const auto& f = *table.fits;
    json fits = {{"Erms_T", fit_json(f.T)}, {"Erms_gradT", fit_json(f.grad)}};
    if (f.Tx) {
      fits["Erms_Tx"] = fit_json(*f.Tx);
      fits["Erms_Ty"] = fit_json(*f.Ty);
      fits["Erms_Txx"] = fit_json(*f.Txx);
      fits["Erms_Txy"] = fit_json(*f.Txy);
      fits["Erms_Tyy"] = fit_json(*f.Tyy);
    }
    j["fits"] = fits;
    j["fit_sizes"] = {table.rows[table.fit_first].M, table.rows[table.fit_last - 1].M};
  } else {
    j["fits"] = nullptr;
    j["notice"] = "fewer than two sizes in the fit window; fit skipped";
  }
  os << j.dump(2) << '\n';
}

DumpFormat parse_dump_format(const std::string& s) {
  if (s == "csv") return DumpFormat::csv;
  if (s == "json") return DumpFormat::json;
  if (s == "bin") return DumpFormat::bin;
  throw InvalidInput("unknown format '" + s + "' (expected csv, json or bin)");
}

FieldSet collect_fields(const Marcher& m, double omega) {
  FieldSet f;
  const std::size_t N = m.grid().num_nodes();
  std::vector<double> gx(N), gy(N);
  for (std::size_t n = 0; n < N; ++n) gx[n] = m.grad()[n].x(), gy[n] = m.grad()[n].y();
  f.names = {"T", "Tx", "Ty"};
  f.values = {m.T(), gx, gy};
  if (!m.J().empty()) {
    std::vector<double> absA(N, std::numeric_limits<double>::quiet_NaN()), reU = absA;
    for (std::size_t n = 0; n < N; ++n) {
      if (!(m.J()[n] > 0)) continue;
      const auto A = amplitude_from_spreading(m.J()[n], m.grid().point(static_cast<int>(n)), m.model(), omega);
      absA[n] = std::abs(A);
      reU[n] = (A * std::polar(1.0, omega * m.T()[n])).real();
    }
    f.names.insert(f.names.end(), {"J", "absA", "reU"});
    f.values.push_back(m.J());
    f.values.push_back(absA);
    f.values.push_back(reU);
  }
  return f;
}

namespace {

void write_le_double(std::ostream& os, double v) {
  unsigned char b[8];
  std::memcpy(b, &v, 8);
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + 8);
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream os(path, mode);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  return os;
}

}  // namespace

void field_dump(const Marcher& m, const std::string& problem, const FieldSet& fields,
                const std::string& path, DumpFormat format) {
  const Grid2& g = m.grid();
  const auto& init = m.options().init;
  json meta = {{"problem", problem},
               {"solver", std::string(to_string(m.options().solver))},
               {"M", g.size()},
               {"h", g.h()},
               {"xmin", g.xmin()},
               {"ymin", g.ymin()},
               {"layout", "row-major, index i*M + j, x = xmin + i h, y = ymin + j h"},
               {"fields", fields.names}};
  const char* kinds[] = {"disk", "box", "slab"};
  meta["init_region"] = {{"kind", kinds[static_cast<int>(init.kind)]}, {"r0", init.r0}, {"C", init.C}};

  if (format == DumpFormat::csv) {
    auto os = open_out(path + ".csv");
    os << "i,j,x,y";
    for (const auto& n : fields.names) os << ',' << n;
    os << '\n' << std::setprecision(17);
    for (int n = 0; n < static_cast<int>(g.num_nodes()); ++n) {
      const NodeIndex nd = g.node(n);
      const Vec2 x = g.point(n);
      os << nd.i << ',' << nd.j << ',' << x.x() << ',' << x.y();
      for (const auto& v : fields.values) os << ',' << v[n];
      os << '\n';
    }
    if (!os) throw std::runtime_error("write failed: " + path + ".csv");
    return;
  }
  if (format == DumpFormat::bin) {
    auto os = open_out(path + ".bin", std::ios::out | std::ios::binary);
    for (const auto& v : fields.values)
      for (double d : v) write_le_double(os, d);
    if (!os) throw std::runtime_error("write failed: " + path + ".bin");
    meta["binary"] = path + ".bin";
    meta["dtype"] = "float64 little-endian";
  } else {
    json data;
    for (std::size_t k = 0; k < fields.names.size(); ++k) {
      json arr = json::array();
      for (double d : fields.values[k]) arr.push_back(std::isfinite(d) ? json(d) : json(nullptr));
      data[fields.names[k]] = std::move(arr);
    }
    meta["data"] = std::move(data);
  }
  auto os = open_out(path + ".json");
  os << meta.dump(2) << '\n';
  if (!os) throw std::runtime_error("write failed: " + path + ".json");
}

}  // namespace jmm
