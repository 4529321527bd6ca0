// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#include "zigzag/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "zigzag/hamiltonian.hpp"
#include "zigzag/operator_io.hpp"
#include "zigzag/parallel.hpp"

namespace zigzag::run {

namespace {

using nlohmann::ordered_json;

std::string describe(const ModelParams& p) {
  return "L=" + std::to_string(p.L) + " N=" + std::to_string(p.N) + " g=" + io::format_double(p.g) +
         " eta=" + io::format_double(p.eta) + " " + std::string(to_string(p.boundary));
}

bool same_model(const ModelParams& a, const ModelParams& b) {
  return a.L == b.L && a.N == b.N && a.boundary == b.boundary && a.g == b.g && a.eta == b.eta && a.J == b.J;
}

SparseOperator obtain_operator(const RunConfig& cfg, const ModelParams& p, const BasisSector& sector) {
  const auto path = cfg.out_dir / io::operator_file_name(p);
  if (cfg.operator_cache && std::filesystem::exists(path)) {
    try {
      auto loaded = io::read_operator(path);
      if (same_model(loaded.params, p) && loaded.op.dim() == sector.dim()) return std::move(loaded.op);
    } catch (const std::runtime_error&) {
      // unreadable cache entry: rebuild and overwrite below
    }
  }
  auto H = build_boson(p, sector);
  if (cfg.dump_operator || cfg.operator_cache) io::write_operator(path, H, p);
  return H;
}

template <class F>
std::optional<double> mixture(const std::vector<CVector>& states, F&& f) {
  try {
    double s = 0.0;
    for (const auto& v : states) s += f(State(v));
    return s / static_cast<double>(states.size());
  } catch (const std::out_of_range&) {
    return std::nullopt;
  }
}

std::string peaks_json(const std::vector<std::vector<Peak>>& peaks, const std::vector<double>& line_values,
                       Axis axis) {
  ordered_json lines = ordered_json::array();
  for (std::size_t l = 0; l < peaks.size(); ++l) {
    ordered_json ps = ordered_json::array();
    for (const auto& pk : peaks[l]) ps.push_back({{"x", pk.x}, {"height", pk.height}, {"prominence", pk.prominence}});
    lines.push_back({{axis == Axis::G ? "eta" : "g", line_values[l]}, {"peaks", ps}});
  }
  return ordered_json{{"scan_axis", std::string(to_string(axis))}, {"lines", lines}}.dump();
}

}  // namespace

int correlator_site(const ModelParams& p) noexcept { return p.periodic() ? 0 : 2 * ((p.L - 2) / 4); }

PointResult run_point(const RunConfig& cfg, const ModelParams& p, bool keep_vectors, int matvec_threads) {
  p.validate();
  const BasisSector sector(p.L, p.N);
  const auto H = obtain_operator(cfg, p, sector);

  LanczosOptions o;
  o.seed = cfg.seed;
  o.tol = cfg.tol;
  o.max_iter = cfg.max_iter;
  o.threads = std::max(1, matvec_threads);
  SpectralResult s;
  try {
    s = lanczos_ground(H, o);
  } catch (const SolverFailure& e) {
    throw SolverFailure(describe(p) + ": " + e.what(), e.best_residual());
  }

  PointResult out;
  auto& r = out.report;
  r.params = p;
  r.dim = sector.dim();
  r.energy = s.energies.front();
  r.multiplet = s.ground_multiplet;
  r.matvecs = s.matvecs;
  r.seed = s.seed;
  std::vector<CVector> ground(s.vectors.begin(), s.vectors.begin() + s.ground_multiplet);
  for (int i = 0; i < s.ground_multiplet; ++i) r.residual = std::max(r.residual, s.residuals[i]);

  const int L = p.L;
  const auto& sel = cfg.observables;
  if (sel.density) {
    r.density.assign(L, 0.0);
    for (const auto& v : ground) {
      const auto n = density(sector, v);
      for (int j = 0; j < L; ++j) r.density[j] += n[j] / static_cast<double>(ground.size());
    }
  }
  if (sel.g2) r.g2 = g2_mixture(sector, ground, p.periodic());
  if (sel.currents) {
    for (int j = 0; j < L; ++j) {
      r.current_nnn.push_back(mixture(ground, [&](State v) { return current_nnn(sector, v, p, j, cfg.convention); }));
      r.current_nn.push_back(mixture(ground, [&](State v) { return current_nn(sector, v, p, j, cfg.convention); }));
    }
  }
  if (sel.flux) {
    for (int j = 0; j < L; ++j)
      r.flux.push_back(plaquette_valid(L, p.periodic(), j)
                           ? mixture(ground, [&](State v) { return plaquette_flux(sector, v, p.periodic(), j).mean; })
                           : std::nullopt);
    try {
      r.chi = chi_from_fluxes(r.flux, L, p.periodic());
    } catch (const std::invalid_argument&) {
      r.chi.reset();
    }
  }
  if (sel.correlators) {
    const int j = correlator_site(p);
    r.corr_site = j;
    r.re_nn = mixture(ground, [&](State v) { return corr1(sector, v, (j + 1) % L, j).real(); });
    if (p.periodic() || j + 2 < L)
      r.im_nnn = mixture(ground, [&](State v) { return corr1(sector, v, (j + 2) % L, j).imag(); });
  }
  if (sel.continuity) {
    double worst = 0.0;
    for (const auto& v : ground)
      for (double d : current_divergence(H, sector, v)) worst = std::max(worst, std::abs(d));
    r.max_divergence = worst;
  }
  if (keep_vectors) out.ground = std::move(ground);
  return out;
}

std::vector<std::string> report_columns(int L, bool with_fidelity) {
  std::vector<std::string> c{"L",     "N",     "g",      "eta",       "J",       "boundary",
                             "seed",  "dim",   "energy", "multiplet", "residual", "matvecs",
                             "chi",   "re_nn", "im_nnn", "corr_site", "max_div"};
  if (with_fidelity) c.push_back("fidelity");
  for (const char* prefix : {"n_", "g2_", "inn_", "in_", "flux_"})
    for (int j = 0; j < L; ++j) c.push_back(prefix + std::to_string(j));
  return c;
}

io::Row report_row(const ObservableReport& r, bool with_fidelity) {
  const auto& p = r.params;
  const int L = p.L;
  io::Row row{std::int64_t{L},
              std::int64_t{p.N},
              p.g,
              p.eta,
              p.J,
              std::string(to_string(p.boundary)),
              static_cast<std::int64_t>(r.seed),
              static_cast<std::int64_t>(r.dim),
              r.energy,
              std::int64_t{r.multiplet},
              r.residual,
              std::int64_t{r.matvecs},
              io::cell(r.chi),
              io::cell(r.re_nn),
              io::cell(r.im_nnn),
              std::int64_t{r.corr_site},
              io::cell(r.max_divergence)};
  if (with_fidelity) row.push_back(io::cell(r.fidelity));
  auto vec = [&](const std::vector<double>& v) {
    for (int j = 0; j < L; ++j) row.push_back(j < static_cast<int>(v.size()) ? io::Cell{v[j]} : io::Cell{});
  };
  auto opt = [&](const std::vector<std::optional<double>>& v) {
    for (int j = 0; j < L; ++j) row.push_back(j < static_cast<int>(v.size()) ? io::cell(v[j]) : io::Cell{});
  };
  vec(r.density);
  vec(r.g2);
  opt(r.current_nnn);
  opt(r.current_nn);
  opt(r.flux);
  return row;
}

std::vector<Peak> find_peaks(const std::vector<double>& x, const std::vector<double>& y, double min_prominence) {
  if (x.size() != y.size()) throw std::invalid_argument("find_peaks: size mismatch");
  std::vector<Peak> out;
  const std::size_t n = y.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(y[i] > y[i - 1])) continue;
    // plateaus count once, at their left end
    std::size_t k = i;
    while (k + 1 < n && y[k + 1] == y[i]) ++k;
    if (k + 1 >= n || !(y[k + 1] < y[i])) continue;
    double left = y[i], right = y[i];
    for (std::size_t a = i; a-- > 0;) {
      if (y[a] > y[i]) break;
      left = std::min(left, y[a]);
    }
    for (std::size_t b = k + 1; b < n; ++b) {
      if (y[b] > y[i]) break;
      right = std::min(right, y[b]);
    }
    const double prom = y[i] - std::max(left, right);
    if (prom >= min_prominence) out.push_back({x[i], y[i], prom, i});
  }
  return out;
}

SweepResult run_sweep(const RunConfig& cfg, int L, bool write, const Progress& progress) {
  cfg.validate();
  const auto& scan = cfg.axis == Axis::G ? cfg.g_grid : cfg.eta_grid;
  const auto& lines = cfg.axis == Axis::G ? cfg.eta_grid : cfg.g_grid;
  const std::size_t nk = scan.size(), nl = lines.size(), total = nk * nl;
  const bool with_fid = nk > 1;

  auto params_of = [&](std::size_t i) {
    const double a = scan[i % nk], b = lines[i / nk];
    return cfg.axis == Axis::G ? cfg.point(a, b, L) : cfg.point(b, a, L);
  };
  for (std::size_t i = 0; i < total; ++i) params_of(i).validate();

  struct Slot {
    bool done = false;
    bool left = false;   // fidelity with the previous point used this vector
    bool right = false;  // fidelity with the next point computed
    ObservableReport report;
    std::vector<CVector> ground;
  };
  std::vector<Slot> slots(total);
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;

  const int budget = resolve_threads(cfg.threads);
  const int workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(budget), total));
  const int matvec_threads = std::max(1, budget / workers);

  auto first_in_line = [&](std::size_t i) { return i % nk == 0; };
  auto last_in_line = [&](std::size_t i) { return i % nk == nk - 1; };
  auto release = [&](std::size_t i) {
    auto& s = slots[i];
    if ((s.left || first_in_line(i)) && (s.right || last_in_line(i))) std::vector<CVector>().swap(s.ground);
  };
  auto pair = [&](std::size_t a) {  // caller holds mu
    const std::size_t b = a + 1;
    if (last_in_line(a) || !slots[a].done || !slots[b].done || slots[a].right) return;
    const double dl = scan[b % nk] - scan[a % nk];
    slots[a].report.fidelity = fidelity(slots[a].ground, slots[b].ground, dl, slots[a].report.params.N);
    slots[a].right = true;
    slots[b].left = true;
    release(a);
    release(b);
  };

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      try {
        auto res = run_point(cfg, params_of(i), with_fid, matvec_threads);
        std::lock_guard lk(mu);
        slots[i].report = std::move(res.report);
        slots[i].ground = std::move(res.ground);
        slots[i].done = true;
        if (!first_in_line(i)) pair(i - 1);
        pair(i);
        release(i);
      } catch (...) {
        std::lock_guard lk(mu);
        if (!error) error = std::current_exception();
        next.store(total);
      }
      cv.notify_all();
    }
  };

  SweepResult result;
  std::unique_ptr<io::DatasetWriter> writer;
  if (write) {
    const std::string stem = (cfg.tag.empty() ? std::string("sweep") : cfg.tag) + "_L" + std::to_string(L);
    result.file = cfg.out_dir / (stem + std::string(io::extension(cfg.format)));
    writer = std::make_unique<io::DatasetWriter>(result.file, cfg.format, report_columns(L, with_fid), cfg.to_json());
  }

  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);

  // single writer, strictly in grid order
  for (std::size_t i = 0; i < total; ++i) {
    std::unique_lock lk(mu);
    cv.wait(lk, [&] { return error || (slots[i].done && (slots[i].right || last_in_line(i))); });
    if (error) break;
    const ObservableReport rep = slots[i].report;
    lk.unlock();
    if (writer) writer->append(report_row(rep, with_fid));
    result.points.push_back(rep);
    if (progress) progress(i + 1, total);
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  for (std::size_t l = 0; l < nl; ++l) {
    std::vector<double> xs, fs;
    for (std::size_t k = 0; k + 1 < nk; ++k) {
      const auto& r = result.points[l * nk + k];
      xs.push_back(0.5 * (scan[k] + scan[k + 1]));
      fs.push_back(*r.fidelity);
    }
    result.fidelity_x.insert(result.fidelity_x.end(), xs.begin(), xs.end());
    result.fidelity.insert(result.fidelity.end(), fs.begin(), fs.end());
    result.peaks.push_back(find_peaks(xs, fs, cfg.prominence));
  }
  if (writer) writer->close(peaks_json(result.peaks, lines, cfg.axis));
  return result;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw std::invalid_argument("fit_line needs at least two points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("fit_line: all x equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    f.residuals.push_back(y[i] - (f.intercept + f.slope * x[i]));
    ss += f.residuals.back() * f.residuals.back();
  }
  if (n > 2) {
    const double s2 = ss / static_cast<double>(n - 2);
    f.intercept_stderr = std::sqrt(s2 * (1.0 / static_cast<double>(n) + mx * mx / sxx));
  }
  return f;
}

FssResult fit_branches(std::vector<SweepResult> cuts, const std::vector<int>& sizes, int peaks) {
  FssResult out;
  std::vector<std::vector<Peak>> kept;
  std::size_t nb = static_cast<std::size_t>(peaks);
  for (const auto& c : cuts) {
    auto p = c.peaks.empty() ? std::vector<Peak>{} : c.peaks.front();
    std::sort(p.begin(), p.end(), [](const Peak& a, const Peak& b) { return a.prominence > b.prominence; });
    if (p.size() > nb) p.resize(nb);
    std::sort(p.begin(), p.end(), [](const Peak& a, const Peak& b) { return a.x < b.x; });
    nb = std::min(nb, p.size());
    kept.push_back(std::move(p));
  }
  out.cuts = std::move(cuts);
  if (sizes.size() < 2) return out;
  for (std::size_t b = 0; b < nb; ++b) {
    FssBranch br;
    std::vector<double> inv;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      // with fewer peaks at some size, take the outermost ones from each end
      const auto& p = kept[i];
      const std::size_t idx = b < nb / 2 + nb % 2 ? b : p.size() - (nb - b);
      br.sizes.push_back(sizes[i]);
      br.positions.push_back(p[idx].x);
      inv.push_back(1.0 / sizes[i]);
    }
    br.fit = fit_line(inv, br.positions);
    bool up = true, down = true;
    std::vector<std::size_t> order(sizes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) { return sizes[a] < sizes[c]; });
    for (std::size_t i = 1; i < order.size(); ++i) {
      up = up && br.positions[order[i]] >= br.positions[order[i - 1]];
      down = down && br.positions[order[i]] <= br.positions[order[i - 1]];
    }
    br.monotone = up || down;
    out.branches.push_back(std::move(br));
  }
  return out;
}

FssResult finite_size_scan(const RunConfig& cfg, bool write, const Progress& progress) {
  cfg.validate();
  if ((cfg.axis == Axis::G ? cfg.eta_grid : cfg.g_grid).size() != 1)
    throw ConfigError("finite-size scan needs a single cut (one value on the other axis)");
  std::vector<SweepResult> cuts;
  for (int L : cfg.sizes) {
    RunConfig c = cfg;
    c.model.L = L;
    c.tag = (cfg.tag.empty() ? std::string("fss") : cfg.tag);
    cuts.push_back(run_sweep(c, L, write, progress));
  }
  auto out = fit_branches(std::move(cuts), cfg.sizes, cfg.peaks);
  if (write) {
    std::vector<io::Row> rows;
    ordered_json meta = ordered_json::array();
    for (std::size_t b = 0; b < out.branches.size(); ++b) {
      const auto& br = out.branches[b];
      for (std::size_t i = 0; i < br.sizes.size(); ++i)
        rows.push_back({std::int64_t(b), std::string("measured"), std::int64_t{br.sizes[i]}, 1.0 / br.sizes[i],
                        br.positions[i], br.fit.residuals[i]});
      rows.push_back({std::int64_t(b), std::string("extrapolated"), io::Cell{}, 0.0, br.fit.intercept,
                      io::cell(br.fit.intercept_stderr)});
      meta.push_back({{"branch", b},
                      {"intercept", br.fit.intercept},
                      {"slope", br.fit.slope},
                      {"intercept_stderr", br.fit.intercept_stderr ? ordered_json(*br.fit.intercept_stderr)
                                                                   : ordered_json(nullptr)},
                      {"monotone", br.monotone}});
    }
    out.file = cfg.out_dir / ((cfg.tag.empty() ? std::string("fss") : cfg.tag) + "_extrapolation" +
                              std::string(io::extension(cfg.format)));
    io::write_table(out.file, cfg.format, {"branch", "kind", "L", "inv_L", "position", "residual_or_stderr"}, rows,
                    cfg.to_json(), ordered_json{{"branches", meta}}.dump());
  }
  return out;
}

}  // namespace zigzag::run
