#include "ssnmg/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>
#include <tuple>

#include "ssnmg/diagnostics.hpp"
#include "ssnmg/elliptic.hpp"
#include "ssnmg/error.hpp"
#include "ssnmg/mgprec.hpp"

namespace ssnmg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size() && std::isfinite(x)) return x;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::invalid_argument, "config: " + key + " expects a number, got '" + v + "'");
}

int parse_int(const std::string& key, const std::string& v) {
  int x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size())
    fail(ErrorCode::invalid_argument, "config: " + key + " expects an integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  fail(ErrorCode::invalid_argument, "config: " + key + " expects a boolean, got '" + v + "'");
}

template <class T, class F>
std::vector<T> parse_list(const std::string& key, const std::string& v, F parse) {
  std::vector<T> out;
  for (const auto& item : split(v, ',')) out.push_back(parse(key, item));
  return out;
}

bool is_pow2_multiple(int n, int base) {
  if (base <= 0 || n < base || n % base != 0) return false;
  const int r = n / base;
  return (r & (r - 1)) == 0;
}

int log2_exact(int r) {
  int k = 0;
  while ((1 << k) < r) ++k;
  return k;
}

}  // namespace

std::vector<int> ExperimentConfig::base_sizes() const {
  if (!n_bases.empty()) return n_bases;
  std::vector<int> out;
  for (int j0 : j0s) out.push_back(n0 << j0);
  return out;
}

void apply_setting(ExperimentConfig& c, const std::string& key_in, const std::string& value_in) {
  std::string key = trim(key_in);
  std::replace(key.begin(), key.end(), '-', '_');
  const std::string v = trim(value_in);
  if (key == "problem") c.problem = v;
  else if (key == "beta") c.betas = parse_list<double>(key, v, parse_double);
  else if (key == "n") c.ns = parse_list<int>(key, v, parse_int);
  else if (key == "solver") c.solvers = split(v, ',');
  else if (key == "j0") c.j0s = parse_list<int>(key, v, parse_int);
  else if (key == "n0") c.n0 = parse_int(key, v);
  else if (key == "n_base") c.n_bases = parse_list<int>(key, v, parse_int);
  else if (key == "bounds") {
    const auto ab = parse_list<double>(key, v, parse_double);
    require(ab.size() == 2, "config: bounds expects 'a,b'");
    c.a = ab[0];
    c.b = ab[1];
  } else if (key == "a") c.a = parse_double(key, v);
  else if (key == "b") c.b = parse_double(key, v);
  else if (key == "w") c.w = parse_double(key, v);
  else if (key == "sigma") c.sigma = parse_double(key, v);
  else if (key == "boundary_mode") {
    if (v == "zero_extension") c.boundary = BlurBoundary::zero_extension;
    else if (v == "restricted") c.boundary = BlurBoundary::restricted;
    else fail(ErrorCode::invalid_argument, "config: boundary_mode must be zero_extension or restricted");
  } else if (key == "geometry") c.geometry = v;
  else if (key == "tol" || key == "lin_tol") c.lin_tol = parse_double(key, v);
  else if (key == "inner_tol") c.inner_tol = parse_double(key, v);
  else if (key == "base_tol") c.base_tol = parse_double(key, v);
  else if (key == "max_outer") c.max_outer = parse_int(key, v);
  else if (key == "nested") c.nested = parse_bool(key, v);
  else if (key == "out" || key == "out_dir") c.out_dir = v;
  else if (key == "dump") c.dump = v;
  else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_int(key, v));
  else fail(ErrorCode::invalid_argument, "config: unknown key '" + key_in + "'");
}

void load_config_file(ExperimentConfig& c, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "config: cannot open " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::invalid_argument, path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    apply_setting(c, line.substr(0, eq), line.substr(eq + 1));
  }
}

void validate(const ExperimentConfig& c) {
  require(c.problem == "elliptic" || c.problem == "deblur", "config: problem must be elliptic or deblur");
  require(!c.betas.empty(), "config: empty beta list");
  require(!c.ns.empty(), "config: empty n list");
  require(!c.solvers.empty(), "config: empty solver list");
  for (double beta : c.betas) require(beta > 0.0, "config: beta must be positive");
  for (int n : c.ns) require(n >= 2, "config: n must be at least 2");
  for (const auto& s : c.solvers) require(s == "cg" || s == "mgcg", "config: solver must be cg or mgcg");
  require(c.a < c.b, "config: bounds must satisfy a < b");
  require(c.n0 >= 2, "config: n0 must be at least 2");
  for (int j0 : c.j0s) require(j0 >= 0 && j0 < 20, "config: j0 out of range");
  for (int nb : c.base_sizes()) require(nb >= 2, "config: base size must be at least 2");
  require(c.lin_tol > 0.0 && c.lin_tol < 1.0, "config: tol must lie in (0, 1)");
  require(c.base_tol > 0.0 && c.base_tol < 1.0, "config: base_tol must lie in (0, 1)");
  require(c.max_outer >= 1, "config: max_outer must be positive");
  (void)make_target(c.geometry, 2);
  if (c.nested) {
    const auto [lo, hi] = std::minmax_element(c.ns.begin(), c.ns.end());
    for (int n : c.ns)
      require(is_pow2_multiple(n, *lo), "config: with nested=true every n must be the smallest n times a power of two");
    (void)hi;
  }
  for (const auto& d : split(c.dump, ','))
    require(d == "pgm" || d == "csv", "config: dump must list pgm and/or csv");
}

CellField make_target(const std::string& geometry, int n) {
  require(n >= 1, "make_target: n must be positive");
  std::function<bool(double, double)> inside;
  if (geometry == "two_disks") {
    inside = [](double x, double y) {
      const auto in_disk = [&](double cx, double cy, double r) {
        return (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r;
      };
      return in_disk(0.30, 0.30, 0.15) || in_disk(0.67, 0.58, 0.20);
    };
  } else if (geometry == "two_rects") {
    inside = [](double x, double y) {
      return (x >= 0.15 && x <= 0.45 && y >= 0.20 && y <= 0.70) || (x >= 0.55 && x <= 0.85 && y >= 0.30 && y <= 0.60);
    };
  } else if (geometry == "checker") {
    inside = [](double x, double y) { return (int(std::floor(2 * x)) + int(std::floor(2 * y))) % 2 == 0; };
  } else {
    fail(ErrorCode::invalid_argument, "make_target: unknown geometry '" + geometry + "'");
  }
  CellField u(n);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) u.at(ix, iy) = inside((ix + 0.5) / n, (iy + 0.5) / n) ? 1.0 : 0.0;
  return u;
}

InactiveMask target_mask(const std::string& geometry, int n) {
  const CellField u = make_target(geometry, n);
  InactiveMask m(n);
  for (std::size_t i = 0; i < u.size(); ++i) m.set(i, u[i] != 0.0);
  return m;
}

std::shared_ptr<const OperatorBackend> make_backend(const ExperimentConfig& c) {
  if (c.problem == "elliptic") {
    EllipticConfig ec;
    ec.tol = c.inner_tol;
    return std::make_shared<EllipticBackend>(ec);
  }
  if (c.problem == "deblur") return std::make_shared<BlurBackend>(c.sigma, c.w, c.boundary);
  fail(ErrorCode::invalid_argument, "unknown problem '" + c.problem + "'");
}

ProblemInstance make_instance(const ExperimentConfig& c, std::shared_ptr<const OperatorBackend> backend, double beta,
                              int n) {
  return instance_from_target(std::move(backend), beta, CellField(n, c.a), CellField(n, c.b), make_target(c.geometry, n));
}

std::string csv_header() {
  return "problem,beta,n,solver,j0,n_base,levels,ssnm_iters,avg_lin_iters,total_lin_iters,hessian_applies_by_level,"
         "wall_seconds,kkt_residual,status";
}

std::string to_csv(const SweepRow& r) {
  std::ostringstream os;
  os << r.problem << ',' << std::setprecision(6) << r.beta << ',' << r.n << ',' << r.solver << ',' << r.j0 << ','
     << r.n_base << ',' << r.levels << ',' << r.ssnm_iters << ',' << std::fixed << std::setprecision(3)
     << r.avg_lin_iters << ',' << r.total_lin_iters << ',';
  bool first = true;
  for (const auto& [n, count] : r.hessian_applies) {
    if (!first) os << ';';
    os << n << ':' << count;
    first = false;
  }
  os << ',' << std::setprecision(3) << r.wall_seconds << ',' << std::scientific << std::setprecision(3) << r.kkt << ',';
  std::string status = r.status;
  std::replace(status.begin(), status.end(), ',', ';');
  std::replace(status.begin(), status.end(), '\n', ' ');
  os << status;
  return os.str();
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = csv_header() + "\n";
  for (const auto& r : rows) out += to_csv(r) + "\n";
  return out;
}

namespace {

void maybe_dump(const ExperimentConfig& c, const CellField& u, double beta) {
  const auto formats = split(c.dump, ',');
  if (formats.empty()) return;
  std::filesystem::create_directories(c.out_dir);
  std::string stem = "u_min_" + std::to_string(u.n());
  if (c.betas.size() > 1) {
    std::ostringstream os;
    os << "_beta" << beta;
    stem += os.str();
  }
  for (const auto& f : formats) {
    const DumpFormat fmt = f == "pgm" ? DumpFormat::pgm : DumpFormat::csv;
    dump_field(u, std::filesystem::path(c.out_dir) / (stem + "." + f), fmt);
  }
}

}  // namespace

std::vector<SweepRow> run_sweep(const ExperimentConfig& c) {
  validate(c);
  const auto backend = make_backend(c);
  std::vector<int> listed = c.ns;
  std::sort(listed.begin(), listed.end());
  listed.erase(std::unique(listed.begin(), listed.end()), listed.end());

  std::vector<int> chain = listed;
  if (c.nested) {
    chain.clear();
    for (int n = listed.front(); n <= listed.back(); n *= 2) chain.push_back(n);
  }

  PdasOptions opt;
  opt.max_outer = c.max_outer;
  opt.lin_tol = c.lin_tol;
  opt.base.rel_tol = c.base_tol;

  std::vector<SweepRow> rows;
  std::map<std::pair<double, int>, bool> dumped;
  for (double beta : c.betas)
    for (const auto& solver : c.solvers) {
      const std::vector<int> bases = solver == "cg" ? std::vector<int>{0} : c.base_sizes();
      for (int n_base : bases) {
        std::optional<SsnmState> init;
        for (int n : chain) {
          const bool is_listed = std::binary_search(listed.begin(), listed.end(), n);
          SweepRow row;
          row.problem = c.problem;
          row.beta = beta;
          row.n = n;
          row.solver = solver;
          row.n_base = n_base;
          row.j0 = (solver == "mgcg" && is_pow2_multiple(n_base, c.n0)) ? log2_exact(n_base / c.n0) : -1;
          SolverChoice choice;
          const bool use_mg = solver == "mgcg" && n > n_base;
          if (use_mg) {
            choice.kind = SolverKind::mgcg;
            choice.n_base = n_base;
            if (!is_pow2_multiple(n, n_base)) {
              row.status = "error: n is not n_base times a power of two";
              if (is_listed) rows.push_back(row);
              init.reset();
              continue;
            }
            row.levels = log2_exact(n / n_base) + 1;
          }
          const auto t0 = std::chrono::steady_clock::now();
          try {
            const ProblemInstance inst = make_instance(c, backend, beta, n);
            PdasResult res = pdas_solve(inst, choice, opt, init);
            row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            row.ssnm_iters = res.state.outer_iterations;
            row.avg_lin_iters = res.average_linear_iterations();
            row.total_lin_iters = res.total_linear_iterations();
            row.hessian_applies = res.hessian_applies;
            row.kkt = kkt_residual(res.state, inst);
            row.status = res.ok() ? std::string("converged") : std::string(to_string(res.status)) +
                                                                   (res.message.empty() ? "" : ": " + res.message);
            if (solver == "mgcg" && !use_mg) row.status = "skipped";
            if (res.ok()) {
              if (is_listed && !dumped[{beta, n}] && row.status == "converged") {
                maybe_dump(c, res.state.u, beta);
                dumped[{beta, n}] = true;
              }
              SsnmState next;
              next.u = inject(res.state.u);
              next.lambda = inject(res.state.lambda);
              init = c.nested ? std::optional<SsnmState>(std::move(next)) : std::nullopt;
            } else {
              init.reset();
            }
          } catch (const Error& e) {
            row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            row.status = std::string("error: ") + e.what();
            init.reset();
          }
          if (is_listed) rows.push_back(row);
        }
      }
    }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& x, const SweepRow& y) {
    return std::tie(x.beta, x.solver, x.n_base, x.n) < std::tie(y.beta, y.solver, y.n_base, y.n);
  });
  return rows;
}

void dump_field(const CellField& u, const std::filesystem::path& path, DumpFormat format) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "dump_field: cannot open " + path.string());
  const int n = u.n();
  if (format == DumpFormat::csv) {
    out << n << '\n';
    char buf[32];
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix) {
        std::snprintf(buf, sizeof buf, "%.17g", u.at(ix, iy));
        out << (ix ? "," : "") << buf;
      }
      out << '\n';
    }
  } else {
    double lo = u[0], hi = u[0];
    for (double v : u.values()) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "# min=%.17g max=%.17g", lo, hi);
    out << "P2\n" << buf << '\n' << n << ' ' << n << "\n255\n";
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix) {
        const int g = hi > lo ? static_cast<int>(std::lround(255.0 * (u.at(ix, iy) - lo) / (hi - lo))) : 0;
        out << (ix ? " " : "") << g;
      }
      out << '\n';
    }
  }
  if (!out) fail(ErrorCode::io, "dump_field: write failed for " + path.string());
}

CellField read_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "read_field_csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::io, "read_field_csv: empty file");
  const int n = parse_int("n", trim(line));
  require(n >= 1, "read_field_csv: bad size");
  CellField u(n);
  for (int iy = 0; iy < n; ++iy) {
    if (!std::getline(in, line)) fail(ErrorCode::io, "read_field_csv: missing rows");
    const auto items = split(line, ',');
    if (static_cast<int>(items.size()) != n) fail(ErrorCode::io, "read_field_csv: wrong row length");
    for (int ix = 0; ix < n; ++ix) u.at(ix, iy) = std::strtod(items[ix].c_str(), nullptr);
  }
  return u;
}

namespace {

DenseMatrix random_spd(std::mt19937_64& rng, int m, double spread) {
  std::normal_distribution<double> g(0.0, 1.0);
  DenseMatrix x(m);
  for (auto& v : x.a) v = g(rng);
  DenseMatrix a = x * transpose(x);
  for (int i = 0; i < m; ++i) a(i, i) += spread;
  return symmetrized(a);
}

std::string study_spectral(const ExperimentConfig& c) {
  std::mt19937_64 rng(c.seed);
  std::ostringstream os;
  os << "check,value\n" << std::setprecision(10);
  const DenseMatrix i6 = DenseMatrix::identity(6);
  os << "d(I,I)," << spectral_distance(i6, i6) << '\n';
  os << "d(2I,I)," << spectral_distance(2.0 * i6, i6) << '\n';
  double worst_sym = 0.0, worst_tri = 0.0, worst_inv = 0.0;
  for (int t = 0; t < 20; ++t) {
    const DenseMatrix a = random_spd(rng, 6, 1.0), b = random_spd(rng, 6, 1.0), d = random_spd(rng, 6, 1.0);
    const double ab = spectral_distance(a, b);
    worst_sym = std::max(worst_sym, std::abs(ab - spectral_distance(b, a)));
    worst_tri = std::max(worst_tri, ab - spectral_distance(a, d) - spectral_distance(d, b));
    worst_inv = std::max(worst_inv, std::abs(ab - spectral_distance(spd_inverse(a), spd_inverse(b))));
  }
  os << "max |d(A,B)-d(B,A)|," << worst_sym << '\n';
  os << "max d(A,B)-d(A,C)-d(C,B)," << worst_tri << '\n';
  os << "max |d(A,B)-d(A^-1,B^-1)|," << worst_inv << '\n';
  return os.str();
}

std::string study_twogrid(const ExperimentConfig& c) {
  const auto backend = make_backend(c);
  std::ostringstream os;
  os << "beta,n,h,dim,boundary_measure,h_plus_mu,distance\n" << std::setprecision(10);
  for (double beta : c.betas) {
    const auto rows = two_grid_rate_study([&](int n) { return target_mask(c.geometry, n); }, backend, beta, c.ns);
    for (const auto& r : rows)
      os << beta << ',' << r.n << ',' << r.h << ',' << r.dim << ',' << r.boundary_measure << ','
         << r.h + r.boundary_measure << ',' << r.distance << '\n';
  }
  return os.str();
}

std::string study_wcycle(const ExperimentConfig& c) {
  const auto backend = make_backend(c);
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::ostringstream os;
  os << "n,n_base,level_n,hessian_applies,base_solves\n";
  const double beta = c.betas.front();
  for (int n : c.ns)
    for (int nb : c.base_sizes()) {
      if (!(n > nb && is_pow2_multiple(n, nb))) continue;
      const int j = log2_exact(n / nb);
      const InactiveMask mask = target_mask(c.geometry, n);
      MultigridPreconditioner mg(GridHierarchy(nb, j + 1), j, 0, mask, beta, backend);
      CellField v(n);
      for (std::size_t i = 0; i < v.size(); ++i)
        if (mask[i]) v[i] = uni(rng);
      (void)mg.apply(v);
      for (int k = 0; k <= j; ++k)
        os << n << ',' << nb << ',' << mg.n(k) << ',' << mg.hessian_applies(k) << ','
           << (k == 0 ? mg.base_solves() : 0) << '\n';
    }
  return os.str();
}

}  // namespace

std::string run_study(const ExperimentConfig& c, const std::string& study) {
  if (study == "spectral") return study_spectral(c);
  validate(c);
  if (study == "twogrid-rate") return study_twogrid(c);
  if (study == "wcycle-count") return study_wcycle(c);
  fail(ErrorCode::invalid_argument, "unknown study '" + study + "'");
}

}  // namespace ssnmg
