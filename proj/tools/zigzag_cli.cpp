// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0
//
// zigzag: exact diagonalization, sweeps and the auxiliary models from one binary.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "zigzag/gutzwiller.hpp"
#include "zigzag/hamiltonian.hpp"
#include "zigzag/meanfield.hpp"
#include "zigzag/micro.hpp"
#include "zigzag/operator_io.hpp"
#include "zigzag/parallel.hpp"
#include "zigzag/sweep.hpp"

using namespace zigzag;
using nlohmann::ordered_json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_solver = 3;

std::vector<double> parse_grid(const std::string& s) {
  auto num = [&](const std::string& t) {
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(t, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != t.size() || t.empty()) throw ConfigError("bad number '" + t + "' in grid '" + s + "'");
    return v;
  };
  std::vector<std::string> parts;
  if (s.find(':') != std::string::npos) {
    std::stringstream ss(s);
    for (std::string t; std::getline(ss, t, ':');) parts.push_back(t);
    if (parts.size() != 3) throw ConfigError("range must be start:stop:step, got '" + s + "'");
    return run::arange(num(parts[0]), num(parts[1]), num(parts[2]));
  }
  std::vector<double> v;
  std::stringstream ss(s);
  for (std::string t; std::getline(ss, t, ',');) v.push_back(num(t));
  if (v.empty()) throw ConfigError("empty grid");
  return v;
}

struct Common {
  std::string config;
  int L = 0, N = 0;
  std::string g, eta, boundary, out, format, tag, axis;
  std::uint64_t seed = 0;
  int threads = 0;
  std::vector<CLI::Option*> opts;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "YAML/JSON run configuration")->check(CLI::ExistingFile);
    opts = {app->add_option("--L", L, "sites"),
            app->add_option("--N", N, "particles (default L/2)"),
            app->add_option("--g", g, "value, list a,b,c or range start:stop:step"),
            app->add_option("--eta", eta, "value, list or range"),
            app->add_option("--boundary", boundary, "open|periodic"),
            app->add_option("--seed", seed, "Lanczos start vector seed"),
            app->add_option("--threads", threads, "worker budget (0 = all cores)"),
            app->add_option("--out", out, "output directory"),
            app->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"})),
            app->add_option("--tag", tag, "file name stem")};
  }
  [[nodiscard]] bool given(const char* name) const {
    for (auto* o : opts)
      if (o->get_name() == name) return o->count() > 0;
    return false;
  }

  run::RunConfig resolve() const {
    run::RunConfig c = config.empty() ? run::RunConfig{} : run::load_config(config);
    if (given("--L")) {
      c.model.L = L;
      if (!c.n_explicit) c.model.N = L / 2;
      c.sizes = {L};
    }
    if (given("--N")) {
      c.model.N = N;
      c.n_explicit = true;
    }
    if (given("--g")) {
      c.g_grid = parse_grid(g);
      c.model.g = c.g_grid.front();
    }
    if (given("--eta")) {
      c.eta_grid = parse_grid(eta);
      c.model.eta = c.eta_grid.front();
    }
    if (given("--boundary")) c.model.boundary = parse_boundary(boundary);
    if (given("--seed")) c.seed = seed;
    if (given("--threads")) c.threads = threads;
    if (given("--out")) c.out_dir = out;
    if (given("--format")) c.format = io::parse_format(format);
    if (given("--tag")) c.tag = tag;
    return c;
  }
};

std::filesystem::path output_file(const run::RunConfig& c, const std::string& stem) {
  return c.out_dir / ((c.tag.empty() ? stem : c.tag) + std::string(io::extension(c.format)));
}

void require_single_point(const run::RunConfig& c) {
  if (c.g_grid.size() != 1 || c.eta_grid.size() != 1) throw ConfigError("this command takes a single g and eta");
}

int cmd_ed(const run::RunConfig& c) {
  require_single_point(c);
  c.validate();
  const auto p = c.point(c.g_grid.front(), c.eta_grid.front());
  const auto r = run::run_point(c, p, false, resolve_threads(c.threads)).report;
  const auto file = output_file(c, "ed_L" + std::to_string(p.L));
  io::write_table(file, c.format, run::report_columns(p.L, false),
                  std::vector<io::Row>{run::report_row(r, false)}, c.to_json());
  std::printf("E0 = %.12f  multiplet %d  residual %.2e  dim %zu\n", r.energy, r.multiplet, r.residual, r.dim);
  if (r.chi) std::printf("chi = %.10f\n", *r.chi);
  std::printf("wrote %s\n", file.string().c_str());
  return exit_ok;
}

void print_peaks(const run::SweepResult& s) {
  for (std::size_t l = 0; l < s.peaks.size(); ++l)
    for (const auto& p : s.peaks[l]) std::printf("peak line %zu at %.4f height %.4g prominence %.4g\n", l, p.x, p.height, p.prominence);
}

// carriage-return counter on a terminal, one line per point otherwise
void progress(std::size_t done, std::size_t total) {
  static const bool tty = isatty(fileno(stderr));
  std::fprintf(stderr, tty ? "\r%zu/%zu" : "%zu/%zu\n", done, total);
  if (tty && done == total) std::fprintf(stderr, "\n");
}

int cmd_sweep(run::RunConfig c, bool cut) {
  if (cut && (c.axis == run::Axis::G ? c.eta_grid : c.g_grid).size() != 1)
    throw ConfigError("fidelity-cut needs a single value on the fixed axis");
  if (c.tag.empty()) c.tag = cut ? "cut" : "sweep";
  const auto res = run::run_sweep(c, c.model.L, true, progress);
  print_peaks(res);
  std::printf("wrote %s\n", res.file.string().c_str());
  return exit_ok;
}

int cmd_fss(run::RunConfig c) {
  const auto res = run::finite_size_scan(c, true, progress);
  for (std::size_t b = 0; b < res.branches.size(); ++b) {
    const auto& br = res.branches[b];
    std::printf("branch %zu:", b);
    for (std::size_t i = 0; i < br.sizes.size(); ++i) std::printf(" L=%d %.4f", br.sizes[i], br.positions[i]);
    std::printf("  -> %.4f%s\n", br.fit.intercept, br.monotone ? "" : " (not monotone)");
  }
  std::printf("wrote %s\n", res.file.string().c_str());
  return exit_ok;
}

int cmd_meanfield(const run::RunConfig& c, int nk, double g_lo, double g_hi) {
  require_single_point(c);
  const auto& p = c.model;
  const meanfield::BlochModel m{c.g_grid.front(), p.J, c.eta_grid.front()};
  const auto ks = meanfield::k_grid(nk);
  std::vector<io::Row> rows;
  for (double k : ks) {
    const auto b = meanfield::bands(m, k);
    const auto h = m.matrix(k);
    rows.push_back({k, b.lower, b.upper, h(0, 0).real(), h(1, 1).real(), h(0, 1).real(), h(0, 1).imag()});
  }
  const auto gstar = meanfield::folded_crossing(g_lo, g_hi, p.J);
  const double ef = meanfield::fermi_level(m);
  ordered_json meta{{"fermi_level", ef}, {"offset", m.offset()},
                    {"folded_crossing_g", gstar ? ordered_json(*gstar) : ordered_json(nullptr)}};
  const auto file = output_file(c, "meanfield_bands");
  io::write_table(file, c.format, {"k", "e_lower", "e_upper", "h_aa", "h_bb", "re_h_ab", "im_h_ab"}, rows,
                  c.to_json(), meta.dump());

  // real-space Slater determinant at the same g
  const int L = c.model.L;
  const auto dens = meanfield::slater_density(meanfield::real_space_matrix(L, m.g, p.J, p.boundary), c.model.N);
  std::vector<io::Row> drows;
  for (int j = 0; j < L; ++j) drows.push_back({std::int64_t{j}, dens[j]});
  const auto dfile = c.out_dir / ((c.tag.empty() ? std::string("meanfield_density") : c.tag + "_density") +
                                  std::string(io::extension(c.format)));
  io::write_table(dfile, c.format, {"site", "density"}, drows, c.to_json());

  std::printf("fermi level %.10f\n", ef);
  if (gstar) std::printf("folded lower branches cross at g* = %.6f\n", *gstar);
  else std::printf("no folded crossing in [%g, %g]\n", g_lo, g_hi);
  std::printf("wrote %s, %s\n", file.string().c_str(), dfile.string().c_str());
  return exit_ok;
}

int cmd_gutzwiller(const run::RunConfig& c, const std::string& variant, int restarts) {
  const auto v = gutzwiller::parse_variant(variant);
  auto p = c.point(c.g_grid.front(), c.eta_grid.front());
  if (!c.eta_grid.empty() && c.eta_grid.size() != 1) throw ConfigError("gutzwiller takes a single eta");
  gutzwiller::OptimizeOptions o;
  o.restarts = restarts;
  o.seed = c.seed;
  o.threads = resolve_threads(c.threads);
  std::vector<io::Row> rows;
  if (c.g_grid.size() == 1) {
    const auto r = gutzwiller::optimize(p, v, o);
    for (const auto& m : r.distinct) {
      const auto s = gutzwiller::build_state(m.config);
      rows.push_back({p.g, m.config.epsilon, m.config.theta, m.config.phi, m.energy, gutzwiller::chi(s, true),
                      std::int64_t{m.converged}});
    }
    std::printf("best: eps %.6f theta %.6f phi %.6f E %.10f (%zu distinct minima)\n", r.best.config.epsilon,
                r.best.config.theta, r.best.config.phi, r.best.energy, r.distinct.size());
  } else {
    for (const auto& s : gutzwiller::epsilon_scan(p, v, c.g_grid, o)) {
      rows.push_back({s.g, s.best.config.epsilon, s.best.config.theta, s.best.config.phi, s.best.energy, s.chi,
                      std::int64_t{s.best.converged}});
      std::printf("g %.4f eps %.6f E %.10f\n", s.g, s.best.config.epsilon, s.best.energy);
    }
  }
  const auto file = output_file(c, "gutzwiller_" + std::string(gutzwiller::to_string(v)));
  io::write_table(file, c.format, {"g", "epsilon", "theta", "phi", "energy", "chi", "converged"}, rows, c.to_json(),
                  ordered_json{{"variant", std::string(gutzwiller::to_string(v))}}.dump());
  std::printf("wrote %s\n", file.string().c_str());
  return exit_ok;
}

int cmd_micro(const run::RunConfig& c, double alpha, const std::string& deltas) {
  micro::TriangleSetup s;
  s.alpha = alpha;
  const auto t = micro::transition_elements(s.levels);
  const char* names[] = {"<0|d-|+>", "<1|d-|0>", "<0|d+|1>", "<+|d+|0>"};
  std::vector<io::Row> rows;
  for (int i = 0; i < 4; ++i) {
    std::ostringstream sq;
    sq << t[i].square;
    rows.push_back({std::string(names[i]), std::int64_t{t[i].sign}, sq.str(), t[i].value()});
    std::printf("%s = %+.12f\n", names[i], t[i].value());
  }
  const auto h = micro::indirect_amplitude(s, 0, 1, 2);
  std::printf("J = %.12f  h_123 = %.6e %+.6ei  27J^2 = %.6e\n", s.J(), h.real(), h.imag(), 27 * s.J() * s.J());
  io::write_table(output_file(c, "micro_dipoles"), c.format, {"element", "sign", "square", "value"}, rows, c.to_json(),
                  ordered_json{{"J", s.J()}, {"h123_re", h.real()}, {"h123_im", h.imag()}}.dump());

  std::vector<double> ds = parse_grid(deltas);
  for (double& d : ds) d *= s.J();  // given in units of J
  const auto pts = micro::elimination_scan(s, ds);
  std::vector<io::Row> erows;
  for (const auto& p : pts) erows.push_back({p.delta / s.J(), p.error});
  const double slope = micro::loglog_slope(pts);
  std::printf("elimination error slope %.4f\n", slope);
  const auto file = c.out_dir / ((c.tag.empty() ? std::string("micro_elimination") : c.tag + "_elimination") +
                                 std::string(io::extension(c.format)));
  io::write_table(file, c.format, {"delta_over_J", "error_over_J"}, erows, c.to_json(),
                  ordered_json{{"loglog_slope", slope}}.dump());
  std::printf("wrote %s\n", file.string().c_str());
  return exit_ok;
}

int cmd_dump(const run::RunConfig& c, bool fermion, bool verify) {
  require_single_point(c);
  c.validate();
  const auto p = c.point(c.g_grid.front(), c.eta_grid.front());
  const BasisSector sector(p.L, p.N);
  const auto H = fermion ? build_fermion_jw(p, sector) : build_boson(p, sector);
  auto name = io::operator_file_name(p);
  if (fermion) name.insert(name.size() - 5, "_jw");
  const auto file = c.out_dir / name;
  io::write_operator(file, H, p);
  std::printf("dim %zu  nnz %zu  palette %zu  %.1f MB\n", H.dim(), H.nnz_offdiag(), H.palette_size(),
              static_cast<double>(H.memory_bytes()) / 1e6);
  if (verify) {
    const auto back = io::read_operator(file);
    bool same = back.op.dim() == H.dim() && back.op.nnz_offdiag() == H.nnz_offdiag();
    for (std::size_t e = 0; same && e < H.nnz_offdiag(); ++e) same = back.op.value(e) == H.value(e);
    if (!same) throw std::runtime_error("read-back differs from the written operator");
    std::printf("read-back ok\n");
  }
  std::printf("wrote %s\n", file.string().c_str());
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zigzag: hard-core bosons on a zig-zag ladder with density-dependent Peierls phases"};
  app.require_subcommand(1);

  Common ed_o, sw_o, cut_o, fss_o, mf_o, gw_o, mi_o, du_o;
  auto* ed = app.add_subcommand("ed", "ground state and observables at one point");
  ed_o.attach(ed);

  auto* sweep = app.add_subcommand("sweep", "Cartesian (g, eta) grid with fidelity along the scan axis");
  sw_o.attach(sweep);
  std::string sw_axis = "g";
  sweep->add_option("--axis", sw_axis, "scan axis g|eta")->check(CLI::IsMember({"g", "eta"}));

  auto* cut = app.add_subcommand("fidelity-cut", "one-dimensional cut with fidelity peaks");
  cut_o.attach(cut);
  std::string cut_axis = "g";
  double cut_prom = -1;
  cut->add_option("--axis", cut_axis, "scan axis g|eta")->check(CLI::IsMember({"g", "eta"}));
  cut->add_option("--prominence", cut_prom, "minimum peak prominence");

  auto* fss = app.add_subcommand("fss", "repeat a cut over sizes and extrapolate peak positions in 1/L");
  fss_o.attach(fss);
  std::string fss_sizes, fss_axis = "g";
  int fss_peaks = 0;
  fss->add_option("--sizes", fss_sizes, "comma separated L list");
  fss->add_option("--axis", fss_axis, "scan axis g|eta")->check(CLI::IsMember({"g", "eta"}));
  fss->add_option("--peaks", fss_peaks, "peaks tracked per size");

  auto* mf = app.add_subcommand("meanfield", "Bloch bands, folded crossing and Slater densities");
  mf_o.attach(mf);
  int mf_nk = 512;
  double mf_lo = 0.05, mf_hi = 0.95;
  mf->add_option("--nk", mf_nk, "k points");
  mf->add_option("--crossing-range", mf_lo, "lower end of the crossing search");
  mf->add_option("--crossing-max", mf_hi, "upper end of the crossing search");

  auto* gw = app.add_subcommand("gutzwiller", "period-4 product-state optimum (or an epsilon(g) scan)");
  gw_o.attach(gw);
  std::string gw_variant = "symmetric";
  int gw_restarts = 32;
  gw->add_option("--variant", gw_variant, "symmetric|literal");
  gw->add_option("--restarts", gw_restarts, "Nelder-Mead restarts");

  auto* mi = app.add_subcommand("micro", "dipole elements, three-atom hopping and elimination error");
  mi_o.attach(mi);
  double mi_alpha = std::acos(0.5);
  std::string mi_deltas = "1000,1584.893192461114,2511.886431509582,3981.071705534973,6309.573444801933,10000";
  mi->add_option("--alpha", mi_alpha, "bond angle");
  mi->add_option("--deltas", mi_deltas, "detunings in units of J");

  auto* du = app.add_subcommand("dump-operator", "write the sparse Hamiltonian to a versioned binary file");
  du_o.attach(du);
  bool du_fermion = false, du_verify = false;
  du->add_flag("--fermion", du_fermion, "Jordan-Wigner build (open boundary)");
  du->add_flag("--verify", du_verify, "read the file back and compare");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_config;
  }

  try {
    if (*ed) return cmd_ed(ed_o.resolve());
    if (*sweep) {
      auto c = sw_o.resolve();
      if (sweep->get_option("--axis")->count()) c.axis = run::parse_axis(sw_axis);
      return cmd_sweep(c, false);
    }
    if (*cut) {
      auto c = cut_o.resolve();
      if (cut->get_option("--axis")->count()) c.axis = run::parse_axis(cut_axis);
      if (cut_prom >= 0) c.prominence = cut_prom;
      return cmd_sweep(c, true);
    }
    if (*fss) {
      auto c = fss_o.resolve();
      if (fss->get_option("--axis")->count()) c.axis = run::parse_axis(fss_axis);
      if (!fss_sizes.empty()) {
        c.sizes.clear();
        for (double v : parse_grid(fss_sizes)) c.sizes.push_back(static_cast<int>(v));
      }
      if (fss_peaks > 0) c.peaks = fss_peaks;
      return cmd_fss(c);
    }
    if (*mf) return cmd_meanfield(mf_o.resolve(), mf_nk, mf_lo, mf_hi);
    if (*gw) return cmd_gutzwiller(gw_o.resolve(), gw_variant, gw_restarts);
    if (*mi) return cmd_micro(mi_o.resolve(), mi_alpha, mi_deltas);
    if (*du) return cmd_dump(du_o.resolve(), du_fermion, du_verify);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return exit_config;
  } catch (const SolverFailure& e) {
    std::fprintf(stderr, "solver failure: %s (best residual %.3e)\n", e.what(), e.best_residual());
    return exit_solver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return exit_ok;
}
