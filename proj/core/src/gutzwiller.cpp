// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#include "zigzag/gutzwiller.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <thread>
#include <limits>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "zigzag/observables.hpp"
#include "zigzag/parallel.hpp"

namespace zigzag::gutzwiller {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double x) {
  x = std::remainder(x, 2.0 * kPi);
  return x <= -kPi ? x + 2.0 * kPi : x;
}

SiteState make_site(double a, double b, double phase) {
  const double n = std::hypot(a, b);
  return {cplx(a / n), std::polar(b / n, phase)};
}

// GSL wants a C callback; the closure rides in params
double trampoline(const gsl_vector* x, void* params) {
  auto& f = *static_cast<std::function<double(const double*)>*>(params);
  return f(x->data);
}

struct SimplexRun {
  std::vector<double> x;
  double f = 0.0;
  bool converged = false;
  int iterations = 0;
};

SimplexRun simplex(std::function<double(const double*)> f, std::vector<double> x0, double step, double size_tol,
                   int max_iter) {
  const auto n = x0.size();
  gsl_multimin_function fn{&trampoline, n, &f};
  gsl_vector* x = gsl_vector_alloc(n);
  gsl_vector* ss = gsl_vector_alloc(n);
  for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x, i, x0[i]);
  gsl_vector_set_all(ss, step);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(s, &fn, x, ss);
  SimplexRun r;
  int status = GSL_CONTINUE;
  while (status == GSL_CONTINUE && r.iterations < max_iter) {
    ++r.iterations;
    if (gsl_multimin_fminimizer_iterate(s)) break;
    status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), size_tol);
  }
  r.converged = status == GSL_SUCCESS;
  r.f = s->fval;
  r.x.assign(s->x->data, s->x->data + n);
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(ss);
  gsl_vector_free(x);
  return r;
}

void check_params(const ModelParams& p) {
  p.validate();
  if (!p.periodic()) throw ConfigError("gutzwiller: the four-site cell needs periodic boundaries");
}

// eps enters through a tanh so the simplex never leaves the box
double to_eps(double u, double bound) { return bound * std::tanh(u); }
double from_eps(double e, double bound) { return std::atanh(std::clamp(e / bound, -0.999999, 0.999999)); }

}  // namespace

std::string_view to_string(Variant v) noexcept { return v == Variant::Symmetric ? "symmetric" : "literal"; }

Variant parse_variant(std::string_view s) {
  if (s == "symmetric") return Variant::Symmetric;
  if (s == "literal") return Variant::Literal;
  throw ConfigError("unknown gutzwiller variant '" + std::string(s) + "' (expected symmetric|literal)");
}

std::vector<SiteState> build_state(const Config& c) {
  if (c.L < 4 || c.L % 4 != 0) throw ConfigError("gutzwiller: L must be a positive multiple of 4");
  if (!(std::abs(c.epsilon) < 1.0)) throw ConfigError("gutzwiller: |epsilon| must be < 1");
  const double lo = 1.0 - c.epsilon;
  const double hi = 1.0 + c.epsilon;
  const double a = c.theta - c.phi;
  const double b = c.theta + c.phi;
  const std::array<SiteState, 4> cell{
      make_site(lo, hi, a),
      make_site(hi, lo, -a),
      make_site(hi, lo, b),
      make_site(lo, c.variant == Variant::Symmetric ? hi : lo, -b),
  };
  std::vector<SiteState> s(static_cast<std::size_t>(c.L));
  for (int j = 0; j < c.L; ++j) s[j] = cell[j % 4];
  return s;
}

double energy(const std::vector<SiteState>& sites, const TermTable& terms) {
  if (static_cast<int>(sites.size()) != terms.L) throw std::invalid_argument("gutzwiller: state and terms differ in L");
  const auto n = densities(sites);
  double e = 0.0;
  for (const auto& h : terms.hops) {
    // <b^dag> = conj(full) empty, <b> = conj(empty) full
    cplx v = h.amp * std::conj(sites[h.dst].full) * sites[h.dst].empty * std::conj(sites[h.src].empty) *
             sites[h.src].full;
    for (int i = 0; i < h.n_empty; ++i) v *= 1.0 - n[h.empty[i]];
    e += v.real();
  }
  for (const auto& d : terms.diag) e += d.amp * n[d.site] * (1.0 - n[d.other]);
  return e;
}

double energy(const Config& c, const ModelParams& p) {
  check_params(p);
  if (p.L != c.L) throw ConfigError("gutzwiller: config and model disagree on L");
  return energy(build_state(c), build_terms(p));
}

std::vector<double> densities(const std::vector<SiteState>& sites) {
  std::vector<double> n(sites.size());
  for (std::size_t j = 0; j < sites.size(); ++j) n[j] = std::norm(sites[j].full);
  return n;
}

double chi(const std::vector<SiteState>& sites, bool periodic) {
  const int L = static_cast<int>(sites.size());
  const auto n = densities(sites);
  auto at = [&](int j) { return n[((j % L) + L) % L]; };
  std::vector<std::optional<double>> flux(sites.size());
  for (int j = 0; j < L; ++j)
    if (plaquette_valid(L, periodic, j)) flux[j] = kPi / 3.0 * (at(j + 1) + at(j + 2) - at(j - 1) - at(j + 4));
  return chi_from_fluxes(flux, L, periodic);
}

Minimum optimize_phases(const ModelParams& p, Variant v, double epsilon, const OptimizeOptions& opt) {
  check_params(p);
  const auto terms = build_terms(p);
  std::function<double(const double*)> f = [&](const double* x) {
    return energy(build_state({epsilon, x[0], x[1], p.L, v}), terms);
  };
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  Minimum best;
  best.energy = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, opt.restarts); ++r) {
    const auto run = simplex(f, {ang(rng), ang(rng)}, 0.5, opt.size_tol, opt.max_iter);
    if (run.f < best.energy) {
      best.energy = run.f;
      best.config = {epsilon, wrap_angle(run.x[0]), wrap_angle(run.x[1]), p.L, v};
      best.converged = run.converged;
      best.iterations = run.iterations;
    }
  }
  return best;
}

OptimizeResult optimize(const ModelParams& p, Variant v, const OptimizeOptions& opt) {
  check_params(p);
  if (opt.restarts < 1) throw ConfigError("gutzwiller: restarts must be >= 1");
  const auto terms = build_terms(p);
  const double bound = opt.epsilon_bound;

  // starting points drawn up front so results do not depend on the thread count
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> ueps(-bound, bound);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::vector<std::array<double, 3>> starts(static_cast<std::size_t>(opt.restarts));
  for (auto& s : starts) s = {from_eps(ueps(rng), bound), ang(rng), ang(rng)};

  OptimizeResult res;
  res.restarts.resize(starts.size());
  auto work = [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      std::function<double(const double*)> f = [&](const double* x) {
        return energy(build_state({to_eps(x[0], bound), x[1], x[2], p.L, v}), terms);
      };
      const auto run = simplex(f, {starts[i][0], starts[i][1], starts[i][2]}, 0.5, opt.size_tol, opt.max_iter);
      res.restarts[i] = {{to_eps(run.x[0], bound), wrap_angle(run.x[1]), wrap_angle(run.x[2]), p.L, v},
                         run.f,
                         run.converged,
                         run.iterations};
    }
  };
  const int threads = std::min(resolve_threads(opt.threads), opt.restarts);
  if (threads <= 1) {
    work(0, starts.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (starts.size() + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const std::size_t b = t * chunk;
      const std::size_t e = std::min(starts.size(), b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }

  res.best = *std::min_element(res.restarts.begin(), res.restarts.end(),
                               [](const Minimum& a, const Minimum& b) { return a.energy < b.energy; });
  for (const auto& m : res.restarts) {
    if (!m.converged) continue;
    auto same = [&](const Minimum& o) {
      return std::abs(o.energy - m.energy) < 1e-8 && std::abs(o.config.epsilon - m.config.epsilon) < 1e-3 &&
             std::abs(wrap_angle(o.config.theta - m.config.theta)) < 1e-3 &&
             std::abs(wrap_angle(o.config.phi - m.config.phi)) < 1e-3;
    };
    if (std::none_of(res.distinct.begin(), res.distinct.end(), same)) res.distinct.push_back(m);
  }
  std::sort(res.distinct.begin(), res.distinct.end(),
            [](const Minimum& a, const Minimum& b) { return a.energy < b.energy; });
  return res;
}

double curvature_at_zero(const ModelParams& p, Variant v, double h, const OptimizeOptions& opt) {
  const double ep = optimize_phases(p, v, h, opt).energy;
  const double e0 = optimize_phases(p, v, 0.0, opt).energy;
  const double em = optimize_phases(p, v, -h, opt).energy;
  return (ep - 2.0 * e0 + em) / (h * h);
}

std::vector<ScanPoint> epsilon_scan(ModelParams p, Variant v, const std::vector<double>& gs,
                                    const OptimizeOptions& opt) {
  std::vector<ScanPoint> out;
  for (double g : gs) {
    p.g = g;
    const auto r = optimize(p, v, opt);
    out.push_back({g, r.best, chi(build_state(r.best.config), true)});
  }
  return out;
}

}  // namespace zigzag::gutzwiller
