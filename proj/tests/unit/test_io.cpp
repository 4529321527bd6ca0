#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "zigzag/hamiltonian.hpp"
#include "zigzag/operator_io.hpp"
#include "zigzag/sweep.hpp"

using namespace zigzag;
using namespace zigzag::run;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("zigzag_test_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig small_cut(const fs::path& dir, int L = 8) {
  RunConfig c;
  c.model = ModelParams::half_filled(L, 0.0, 1.0, Boundary::Periodic);
  c.g_grid = arange(0.3, 0.5, 0.05);
  c.eta_grid = {1.0};
  c.out_dir = dir;
  c.tag = "t";
  return c;
}

}  // namespace

TEST_CASE("grids") {
  const auto v = arange(0.2, 0.8, 0.005);
  CHECK(v.size() == 121);
  CHECK(v.front() == 0.2);
  CHECK(v.back() == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(v[8] == 0.24);
  CHECK(arange(1, 1, 0.1).size() == 1);
  CHECK_THROWS_AS((void)arange(1, 0, 0.1), ConfigError);
  CHECK_THROWS_AS((void)arange(0, 1, 0), ConfigError);
}

TEST_CASE("config files") {
  const auto c = parse_config(R"(
model: {L: 16, g: 2, eta: 6, boundary: open}
grid:
  eta: {start: 0, stop: 10, step: 0.25}
  axis: eta
sizes: [12, 16]
observables: {g2: false}
output: {format: json, tag: x}
seed: 7
threads: 3
)");
  CHECK(c.model.L == 16);
  CHECK(c.model.N == 8);
  CHECK_FALSE(c.n_explicit);
  CHECK(c.model.boundary == Boundary::Open);
  CHECK(c.g_grid == std::vector<double>{2.0});
  CHECK(c.eta_grid.size() == 41);
  CHECK(c.axis == Axis::Eta);
  CHECK(c.sizes == std::vector<int>{12, 16});
  CHECK_FALSE(c.observables.g2);
  CHECK(c.observables.flux);
  CHECK(c.format == io::Format::Json);
  CHECK(c.seed == 7);
  CHECK(c.threads == 3);
  CHECK(c.point(2, 6, 12).N == 6);

  // JSON is valid YAML
  const auto j = parse_config(R"({"model": {"L": 12, "N": 5}, "grid": {"g": [0.1, 0.2]}})");
  CHECK(j.model.N == 5);
  CHECK(j.n_explicit);
  CHECK(j.g_grid.size() == 2);

  CHECK_THROWS_AS((void)parse_config("model: {Lx: 3}"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("model: {L: [1}"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("grid: {g: {start: 0}}"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("output: {format: xml}"), ConfigError);

  // the header is a full, parseable description
  const auto h = nlohmann::json::parse(c.to_json());
  CHECK(h["model"]["L"] == 16);
  CHECK(h["grid"]["eta"].size() == 41);
  CHECK(h["seed"] == 7);
}

TEST_CASE("validation") {
  auto c = small_cut(scratch("validate"));
  CHECK_NOTHROW(c.validate());
  auto e = c;
  e.g_grid.clear();
  CHECK_THROWS_AS(e.validate(), ConfigError);
  e = c;
  e.model.L = 10;
  CHECK_THROWS_AS(e.validate(), ConfigError);
  e = c;
  e.out_dir = "/proc/zigzag_cannot_write_here";
  CHECK_THROWS_AS(e.validate(), ConfigError);
}

TEST_CASE("csv and json writers") {
  const auto dir = scratch("writers");
  const std::vector<std::string> cols{"a", "b", "c"};
  const std::vector<io::Row> rows{{1.0 / 3.0, std::int64_t{4}, std::string("x,\"y\"")}, {io::Cell{}, -0.0, std::string("z")}};
  io::write_table(dir / "t.csv", io::Format::Csv, cols, rows, R"({"k": 1})", R"({"m": 2})");
  const auto d = io::read_csv(dir / "t.csv");
  REQUIRE(d.comments.size() == 2);
  CHECK(d.comments[0] == R"(config: {"k":1})");
  CHECK(d.comments[1] == R"(meta: {"m":2})");
  CHECK(d.columns == std::vector<std::string>{"schema_version", "a", "b", "c"});
  CHECK(*d.number(0, "a") == 1.0 / 3.0);  // exact round trip
  CHECK(*d.number(0, "schema_version") == io::schema_version);
  CHECK(d.rows[0][3] == "x,\"y\"");
  CHECK_FALSE(d.number(1, "a").has_value());
  CHECK_THROWS_AS((void)d.number(0, "zz"), std::out_of_range);

  io::write_table(dir / "t.json", io::Format::Json, cols, rows, R"({"k": 1})");
  const auto j = nlohmann::json::parse(slurp(dir / "t.json"));
  CHECK(j["schema_version"] == io::schema_version);
  CHECK(j["config"]["k"] == 1);
  CHECK(j["rows"].size() == 2);
  CHECK(j["rows"][0]["a"].get<double>() == 1.0 / 3.0);
  CHECK(j["rows"][1]["a"].is_null());

  io::DatasetWriter w(dir / "bad.csv", io::Format::Csv, cols, "{}");
  CHECK_THROWS_AS(w.append({1.0}), std::invalid_argument);
}

TEST_CASE("peak finding") {
  std::vector<double> x, y;
  for (int i = 0; i <= 200; ++i) {
    const double t = i * 0.005;
    x.push_back(t);
    y.push_back(std::exp(-std::pow((t - 0.3) / 0.02, 2)) + 0.5 * std::exp(-std::pow((t - 0.7) / 0.03, 2)) + 0.1 * t);
  }
  const auto p = find_peaks(x, y, 0.1);
  REQUIRE(p.size() == 2);
  CHECK(p[0].x == doctest::Approx(0.3));
  CHECK(p[1].x == doctest::Approx(0.7).epsilon(0.01));
  CHECK(p[0].prominence > p[1].prominence);
  CHECK(find_peaks(x, y, 0.6).size() == 1);
  // monotone data and edge maxima have no peaks
  CHECK(find_peaks({0, 1, 2}, {0, 1, 2}, 0).empty());
  CHECK(find_peaks({0, 1, 2}, {2, 1, 0}, 0).empty());
  // plateau counts once
  const auto q = find_peaks({0, 1, 2, 3, 4}, {0, 1, 1, 1, 0}, 0.5);
  REQUIRE(q.size() == 1);
  CHECK(q[0].index == 1);
  CHECK(find_peaks({}, {}, 0).empty());
}

TEST_CASE("line fit") {
  const auto f = fit_line({1.0 / 12, 1.0 / 16, 1.0 / 20}, {0.42, 0.40, 0.39});
  // closed form oracle
  const double xs[] = {1.0 / 12, 1.0 / 16, 1.0 / 20}, ys[] = {0.42, 0.40, 0.39};
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < 3; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double b = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
  CHECK(f.slope == doctest::Approx(b));
  CHECK(f.intercept == doctest::Approx((sy - b * sx) / 3));
  double rs = 0;
  for (double r : f.residuals) rs += r;
  CHECK(std::abs(rs) < 1e-14);
  CHECK(f.intercept_stderr.has_value());

  const auto two = fit_line({0.1, 0.2}, {1.0, 3.0});
  CHECK(two.slope == doctest::Approx(20));
  CHECK(two.intercept == doctest::Approx(-1));
  CHECK(std::abs(two.residuals[0]) < 1e-14);
  CHECK_FALSE(two.intercept_stderr.has_value());
  CHECK_THROWS_AS((void)fit_line({1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("branch matching across sizes") {
  std::vector<SweepResult> cuts(3);
  const double pos[3][2] = {{0.45, 0.52}, {0.42, 0.54}, {0.40, 0.56}};
  for (int i = 0; i < 3; ++i)
    cuts[i].peaks = {{{pos[i][0], 2.0, 1.0, 0}, {0.49, 1.1, 0.01, 0}, {pos[i][1], 3.0, 2.0, 0}}};
  const auto r = fit_branches(cuts, {12, 16, 20}, 2);
  REQUIRE(r.branches.size() == 2);
  CHECK(r.branches[0].positions == std::vector<double>{0.45, 0.42, 0.40});
  CHECK(r.branches[1].positions == std::vector<double>{0.52, 0.54, 0.56});
  CHECK(r.branches[0].monotone);
  CHECK(r.branches[0].fit.intercept < 0.40);
  CHECK(r.branches[1].fit.intercept > 0.56);
}

TEST_CASE("single point at g = 0, eta = 0") {
  auto c = small_cut(scratch("trivial"), 12);
  const auto p = c.point(0.0, 0.0);
  const auto r = run_point(c, p).report;
  for (double n : r.density) CHECK(n == doctest::Approx(0.5).epsilon(1e-10));
  for (const auto& i : r.current_nnn) CHECK(std::abs(*i) < 1e-12);
  for (const auto& i : r.current_nn) CHECK(std::abs(*i) < 1e-12);
  CHECK(*r.max_divergence < 1e-8);
  CHECK(r.dim == 924);
}

TEST_CASE("solver failure carries the point") {
  auto c = small_cut(scratch("fail"), 12);
  c.max_iter = 3;
  c.tol = 1e-14;
  try {
    (void)run_point(c, c.point(0.5, 1.0));
    FAIL("expected SolverFailure");
  } catch (const SolverFailure& e) {
    CHECK(std::string(e.what()).find("L=12") != std::string::npos);
  }
}

TEST_CASE("sweep fidelity, determinism and round trip") {
  const auto dir = scratch("sweep");
  auto c = small_cut(dir, 12);
  const auto a = run_sweep(c, 12);
  const std::string first = slurp(a.file);
  REQUIRE(a.points.size() == 5);

  // fidelity against an independent pair of solves
  const auto pa = run_point(c, c.point(0.35, 1.0), true);
  const auto pb = run_point(c, c.point(0.4, 1.0), true);
  CHECK(*a.points[1].fidelity == doctest::Approx(fidelity(pa.ground, pb.ground, 0.05, 6)).epsilon(1e-8));
  CHECK_FALSE(a.points.back().fidelity.has_value());
  CHECK(a.fidelity_x.front() == doctest::Approx(0.325));

  // re-run and a different thread budget give identical bytes
  (void)run_sweep(c, 12);
  CHECK(slurp(a.file) == first);
  c.threads = 2;
  (void)run_sweep(c, 12);
  const auto body = [](const std::string& t) { return t.substr(t.find('\n')); };  // header records threads
  CHECK(body(slurp(a.file)) == body(first));

  // stored chi is what the stored fluxes give
  const auto d = io::read_csv(a.file);
  REQUIRE(d.rows.size() == 5);
  for (std::size_t r = 0; r < d.rows.size(); ++r) {
    std::vector<std::optional<double>> flux;
    for (int j = 0; j < 12; ++j) flux.push_back(d.number(r, "flux_" + std::to_string(j)));
    CHECK(std::abs(chi_from_fluxes(flux, 12, true) - *d.number(r, "chi")) < 1e-12);
    CHECK(*d.number(r, "energy") == a.points[r].energy);
  }
  CHECK(d.comments.front().rfind("config: ", 0) == 0);
  CHECK(d.comments.back().rfind("meta: ", 0) == 0);
}

TEST_CASE("single-point grid has no fidelity column") {
  auto c = small_cut(scratch("single"));
  c.g_grid = {0.4};
  const auto r = run_sweep(c, 8);
  const auto d = io::read_csv(r.file);
  CHECK(d.column("fidelity") == -1);
  CHECK(d.column("energy") >= 0);
  CHECK(r.peaks.front().empty());
}

TEST_CASE("eta axis and json output") {
  auto c = small_cut(scratch("eta"));
  c.g_grid = {1.0, 2.0};
  c.eta_grid = {0.0, 1.0, 2.0};
  c.axis = Axis::Eta;
  c.format = io::Format::Json;
  const auto r = run_sweep(c, 8);
  REQUIRE(r.points.size() == 6);
  CHECK(r.points[1].params.eta == 1.0);
  CHECK(r.points[1].params.g == 1.0);
  CHECK(r.points[3].params.g == 2.0);
  CHECK(r.fidelity.size() == 4);
  CHECK_FALSE(r.points[2].fidelity.has_value());
  const auto j = nlohmann::json::parse(slurp(r.file));
  CHECK(j["rows"].size() == 6);
  CHECK(j["meta"]["lines"].size() == 2);
  CHECK(j["rows"][5]["fidelity"].is_null());
}

TEST_CASE("operator dump") {
  const auto dir = scratch("dump");
  const auto p = ModelParams::half_filled(12, 0.7, 1.3, Boundary::Periodic);
  const BasisSector s(12, 6);
  const auto H = build_boson(p, s);
  const auto f = dir / io::operator_file_name(p);
  io::write_operator(f, H, p);
  const auto back = io::read_operator(f);
  CHECK(back.params.g == p.g);
  CHECK(back.params.eta == p.eta);
  CHECK(back.params.boundary == Boundary::Periodic);
  REQUIRE(back.op.dim() == H.dim());
  REQUIRE(back.op.nnz_offdiag() == H.nnz_offdiag());
  for (std::size_t r = 0; r < H.dim(); ++r) CHECK(back.op.diagonal(r) == H.diagonal(r));
  for (std::size_t e = 0; e < H.nnz_offdiag(); ++e) REQUIRE(back.op.value(e) == H.value(e));

  // flip one byte in the middle
  {
    std::fstream io(f, std::ios::in | std::ios::out | std::ios::binary);
    io.seekp(200);
    char ch;
    io.read(&ch, 1);
    io.seekp(200);
    ch = static_cast<char>(ch ^ 0x10);
    io.write(&ch, 1);
  }
  CHECK_THROWS_AS((void)io::read_operator(f), std::runtime_error);
  {
    std::ofstream o(dir / "junk.zzop");
    o << "not a dump";
  }
  CHECK_THROWS_AS((void)io::read_operator(dir / "junk.zzop"), std::runtime_error);

  // cache: dumps are reused and give the same ground state
  auto c = small_cut(dir, 12);
  c.operator_cache = true;
  const auto e1 = run_point(c, c.point(0.45, 1.0)).report.energy;
  CHECK(fs::exists(dir / io::operator_file_name(c.point(0.45, 1.0))));
  const auto e2 = run_point(c, c.point(0.45, 1.0)).report.energy;
  CHECK(e1 == e2);
}
