#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "ssnmg/diagnostics.hpp"
#include "ssnmg/elliptic.hpp"
#include "ssnmg/error.hpp"
#include "ssnmg/harness.hpp"

using namespace ssnmg;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("ssnmg_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string strip_wall(const std::string& csv) {
  // Drop the wall_seconds column (12th).
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    cells.erase(cells.begin() + 11);
    for (const auto& x : cells) out += x + ",";
    out += "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("targets") {
  const CellField d = make_target("two_disks", 64);
  for (int iy = 0; iy < 64; ++iy)
    for (int ix = 0; ix < 64; ++ix) {
      const double v = d.at(ix, iy);
      CHECK((v == 0.0 || v == 1.0));
      if (ix == 0 || iy == 0 || ix == 63 || iy == 63) CHECK(v == 0.0);
    }
  CHECK(make_target("checker", 2) == CellField(2, {1, 0, 0, 1}));
  for (int n : {32, 64, 128}) {
    const CellField r = make_target("two_rects", n);
    double area = 0.0;
    for (double v : r.values()) area += v;
    area /= double(n) * n;
    CHECK(std::abs(area - 0.24) <= 4.0 / n);
  }
  CHECK_THROWS_AS(make_target("triangle", 8), Error);
  CHECK(target_mask("two_disks", 16).count() > 0);
}

TEST_CASE("numerical boundary of the disk masks shrinks like h") {
  std::vector<double> mu;
  for (int n : {16, 32, 64, 128, 256}) {
    const InactiveMask m = target_mask("two_disks", n);
    mu.push_back(numerical_boundary_measure(m, coarsen_inactive_set(m)));
  }
  for (std::size_t i = 1; i < mu.size(); ++i) {
    const double ratio = mu[i] / mu[i - 1];
    CHECK(ratio >= 0.4);
    CHECK(ratio <= 0.8);
  }
}

TEST_CASE("config parsing") {
  ExperimentConfig c;
  apply_setting(c, "problem", "deblur");
  apply_setting(c, "beta", "0.04, 0.02");
  apply_setting(c, "n", "32,64");
  apply_setting(c, "solver", "cg,mgcg");
  apply_setting(c, "bounds", "-1,2");
  apply_setting(c, "boundary-mode", "restricted");
  CHECK(c.problem == "deblur");
  CHECK(c.betas == std::vector<double>{0.04, 0.02});
  CHECK(c.ns == std::vector<int>{32, 64});
  CHECK(c.a == -1.0);
  CHECK(c.b == 2.0);
  CHECK(c.boundary == BlurBoundary::restricted);
  CHECK_THROWS_AS(apply_setting(c, "colour", "red"), Error);
  CHECK_THROWS_AS(apply_setting(c, "n", "12x"), Error);
  CHECK_THROWS_AS(apply_setting(c, "bounds", "1"), Error);

  const auto dir = temp_dir("config");
  {
    std::ofstream f(dir / "c.cfg");
    f << "# sweep\nproblem = elliptic\nbeta=1e-3   # weight\n\nn=16,32\nj0=1\nn0=8\n";
  }
  ExperimentConfig fc;
  load_config_file(fc, dir / "c.cfg");
  CHECK(fc.problem == "elliptic");
  CHECK(fc.betas == std::vector<double>{1e-3});
  CHECK(fc.base_sizes() == std::vector<int>{16});
  CHECK_THROWS_AS(load_config_file(fc, dir / "missing.cfg"), Error);

  ExperimentConfig bad;
  bad.ns.clear();
  CHECK_THROWS_AS(validate(bad), Error);
  bad = ExperimentConfig{};
  bad.ns = {32, 48};
  CHECK_THROWS_AS(validate(bad), Error);
  bad = ExperimentConfig{};
  bad.a = 1.0;
  bad.b = 0.0;
  CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("large beta: solution close to f / beta") {
  ExperimentConfig c;
  c.a = -1e10;
  c.b = 1e10;
  const double beta = 1e6;
  auto be = make_backend(c);
  const auto inst = make_instance(c, be, beta, 8);
  const auto r = pdas_solve(inst, {});
  REQUIRE(r.ok());
  const auto h = oracle::dense_hessian(*be, 0.0, 8);
  const double ktk_norm = symmetric_eigenvalues(symmetrized(h)).back();
  CellField approx = inst.f();
  approx *= 1.0 / beta;
  CellField d = r.state.u;
  d -= approx;
  CHECK(l2_norm(d) <= 2.0 * ktk_norm / beta * l2_norm(r.state.u));

  ExperimentConfig z;
  z.geometry = "checker";
  auto zero_inst = instance_from_target(be, 1e-3, CellField(8, 0.0), CellField(8, 1.0), CellField(8));
  const auto zr = pdas_solve(zero_inst, {});
  REQUIRE(zr.ok());
  CHECK(l2_norm(zr.state.u) == 0.0);
}

TEST_CASE("sweep rows, skip status and determinism") {
  ExperimentConfig c;
  c.betas = {1e-3};
  c.ns = {16, 32, 64};
  c.solvers = {"cg", "mgcg"};
  c.n_bases = {16};
  const auto rows = run_sweep(c);
  REQUIRE(rows.size() == 6);
  for (const auto& r : rows) CHECK(r.ok());
  CHECK(rows[3].solver == "mgcg");
  CHECK(rows[3].n == 16);
  CHECK(rows[3].status == "skipped");
  CHECK(rows[5].levels == 3);
  CHECK(rows[5].hessian_applies.count(16) == 1);
  for (int i = 4; i < 6; ++i) CHECK(rows[i].avg_lin_iters <= rows[i - 3].avg_lin_iters);
  const std::string again = to_csv(run_sweep(c));
  CHECK(strip_wall(to_csv(rows)) == strip_wall(again));
  CHECK(to_csv(rows).rfind(csv_header(), 0) == 0);

  ExperimentConfig none = c;
  none.ns.clear();
  CHECK_THROWS_AS(run_sweep(none), Error);
}

TEST_CASE("field dumps") {
  const auto dir = temp_dir("dump");
  std::mt19937_64 rng(97);
  const CellField u = oracle::random_field(16, rng);
  dump_field(u, dir / "u.csv", DumpFormat::csv);
  CHECK(read_field_csv(dir / "u.csv") == u);

  dump_field(CellField(4, 0.25), dir / "c.pgm", DumpFormat::pgm);
  std::ifstream in(dir / "c.pgm");
  std::string magic, comment, size, maxval;
  std::getline(in, magic);
  std::getline(in, comment);
  std::getline(in, size);
  std::getline(in, maxval);
  CHECK(magic == "P2");
  CHECK(comment == "# min=0.25 max=0.25");
  CHECK(size == "4 4");
  CHECK(maxval == "255");
  int px, count = 0;
  while (in >> px) {
    CHECK(px == 0);
    ++count;
  }
  CHECK(count == 16);

  CHECK_THROWS_AS(dump_field(u, dir / "missing" / "x.csv", DumpFormat::csv), Error);

  ExperimentConfig c;
  c.ns = {32};
  c.dump = "pgm,csv";
  c.out_dir = (dir / "run").string();
  const auto rows = run_sweep(c);
  REQUIRE(rows.size() == 1);
  CHECK(std::filesystem::exists(dir / "run" / "u_min_32.pgm"));
  CHECK(std::filesystem::exists(dir / "run" / "u_min_32.csv"));
}

TEST_CASE("diagnostic studies") {
  ExperimentConfig c;
  c.problem = "deblur";
  c.betas = {0.1};
  c.ns = {16};
  const std::string tg = run_study(c, "twogrid-rate");
  CHECK(tg.find("beta,n,h,dim") == 0);
  CHECK(tg.find("\n0.1,16,") != std::string::npos);
  const std::string sp = run_study(c, "spectral");
  CHECK(sp.find("d(2I,I),0.6931471806") != std::string::npos);
  c.ns = {64};
  c.n_bases = {8};
  const std::string wc = run_study(c, "wcycle-count");
  CHECK(wc.find("64,8,32,1,0") != std::string::npos);
  CHECK(wc.find("64,8,16,2,0") != std::string::npos);
  CHECK(wc.find("64,8,8,") != std::string::npos);
  CHECK_THROWS_AS(run_study(c, "nonsense"), Error);
}
