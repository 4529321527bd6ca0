#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "zigzag/gutzwiller.hpp"
#include "zigzag/hamiltonian.hpp"

using namespace zigzag;
using namespace zigzag::gutzwiller;

namespace {

constexpr double pi = std::numbers::pi;

// <psi|H|psi> by expanding the product state over every particle-number sector
double dense_energy(const std::vector<SiteState>& sites, ModelParams p) {
  double e = 0.0;
  for (int N = 1; N < p.L; ++N) {
    p.N = N;
    BasisSector s(p.L, N);
    CVector v(s.dim());
    for (std::size_t r = 0; r < s.dim(); ++r) {
      const zigzag::Config c = s[static_cast<StateIndex>(r)];
      cplx a = 1.0;
      for (int j = 0; j < p.L; ++j) a *= occupied(c, j) ? sites[j].full : sites[j].empty;
      v[r] = a;
    }
    e += build_boson(p, s).expectation(v);
  }
  return e;
}

}  // namespace

TEST_CASE("uniform configuration") {
  const auto s = build_state({0.0, 0.0, 0.0, 8, Variant::Symmetric});
  for (double n : densities(s)) CHECK(n == doctest::Approx(0.5));
  CHECK(chi(s, true) == doctest::Approx(0.0));
}

TEST_CASE("sites are normalized and repeat every four") {
  for (auto v : {Variant::Symmetric, Variant::Literal}) {
    const auto s = build_state({0.3, 0.4, -1.1, 16, v});
    for (std::size_t j = 0; j < s.size(); ++j) {
      CHECK(std::norm(s[j].empty) + std::norm(s[j].full) == doctest::Approx(1.0));
      CHECK(s[j].full == s[j % 4].full);
      CHECK(s[j].empty == s[j % 4].empty);
    }
  }
  const auto n = densities(build_state({0.3, 0.0, 0.0, 8, Variant::Symmetric}));
  const double hi = 1.3 * 1.3 / (1.3 * 1.3 + 0.7 * 0.7);
  CHECK(n[0] == doctest::Approx(hi));
  CHECK(n[1] == doctest::Approx(1 - hi));
  CHECK(n[2] == doctest::Approx(1 - hi));
  CHECK(n[3] == doctest::Approx(hi));
  // the printed fourth site has equal weights
  CHECK(densities(build_state({0.3, 0.0, 0.0, 8, Variant::Literal}))[3] == doctest::Approx(0.5));
  CHECK_THROWS_AS((void)build_state({1.0, 0.0, 0.0, 8, Variant::Symmetric}), ConfigError);
  CHECK_THROWS_AS((void)build_state({0.0, 0.0, 0.0, 10, Variant::Symmetric}), ConfigError);
}

TEST_CASE("factorized energy equals the full-vector contraction") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ue(-0.8, 0.8), ua(-pi, pi), ug(0.0, 2.0), un(0.0, 3.0);
  for (int t = 0; t < 6; ++t) {
    auto p = ModelParams::half_filled(8, ug(rng), un(rng), Boundary::Periodic);
    const gutzwiller::Config c{ue(rng), ua(rng), ua(rng), 8, t % 2 ? Variant::Literal : Variant::Symmetric};
    const auto s = build_state(c);
    CAPTURE(p.g);
    CHECK(std::abs(energy(c, p) - dense_energy(s, p)) < 1e-10);
  }
}

TEST_CASE("direct hops only at g = 0") {
  auto p = ModelParams::half_filled(16, 0.0, 1.0, Boundary::Periodic);
  // every <b^dag_i><b_j> = 1/4 on the uniform state; L range-1 and L range-2 bonds, both directions
  CHECK(energy({0.0, 0.0, 0.0, 16, Variant::Symmetric}, p) == doctest::Approx(-p.J * 2 * (16 + 16) * 0.25));
  CHECK_THROWS_AS((void)energy({0.0, 0.0, 0.0, 12, Variant::Symmetric}, p), ConfigError);
  p.boundary = Boundary::Open;
  CHECK_THROWS_AS((void)energy({0.0, 0.0, 0.0, 16, Variant::Symmetric}, p), ConfigError);
}

TEST_CASE("global phase does not change the energy") {
  const auto p = ModelParams::half_filled(16, 0.8, 0.5, Boundary::Periodic);
  const auto terms = build_terms(p);
  auto s = build_state({0.2, 0.7, -0.4, 16, Variant::Symmetric});
  const double e0 = energy(s, terms);
  for (auto& x : s) x.full *= std::polar(1.0, 1.234);
  CHECK(energy(s, terms) == doctest::Approx(e0).epsilon(1e-13));
}

TEST_CASE("flux order of the ansatz follows the density modulation") {
  CHECK(chi(build_state({0.2, 0.3, 0.5, 16, Variant::Symmetric}), true) > 1e-3);
  CHECK(chi(build_state({-0.2, 0.3, 0.0, 16, Variant::Symmetric}), true) > 1e-3);
  CHECK(chi(build_state({0.0, 0.3, 0.5, 16, Variant::Symmetric}), true) < 1e-14);
}

TEST_CASE("weak second-order hopping leaves the uniform state") {
  const auto p = ModelParams::half_filled(16, 0.001, 0.0, Boundary::Periodic);
  OptimizeOptions o;
  o.restarts = 8;
  const auto r = optimize(p, Variant::Symmetric, o);
  CHECK(std::abs(r.best.config.epsilon) < 1e-3);
  CHECK(r.best.energy == doctest::Approx(energy({0.0, 0.0, 0.0, 16, Variant::Symmetric}, p)).epsilon(1e-9));
  CHECK(r.best.converged);
  CHECK(r.restarts.size() == 8);
  CHECK_FALSE(r.distinct.empty());
}

TEST_CASE("optimizer is reproducible and thread independent") {
  const auto p = ModelParams::half_filled(8, 1.0, 0.0, Boundary::Periodic);
  OptimizeOptions a;
  a.restarts = 6;
  OptimizeOptions b = a;
  b.threads = 3;
  const auto ra = optimize(p, Variant::Literal, a);
  const auto rb = optimize(p, Variant::Literal, b);
  for (std::size_t i = 0; i < ra.restarts.size(); ++i) CHECK(ra.restarts[i].energy == rb.restarts[i].energy);
  CHECK_THROWS_AS((void)optimize(p, Variant::Symmetric, {.restarts = 0}), ConfigError);
}

TEST_CASE("phase-only optimum bounds the full optimum") {
  const auto p = ModelParams::half_filled(16, 1.0, 0.0, Boundary::Periodic);
  const auto full = optimize(p, Variant::Literal, {.restarts = 8});
  const auto fixed = optimize_phases(p, Variant::Literal, 0.0, {.restarts = 8});
  CHECK(full.best.energy <= fixed.energy + 1e-12);
  CHECK(fixed.config.epsilon == 0.0);
}

TEST_CASE("variant names") {
  CHECK(parse_variant("symmetric") == Variant::Symmetric);
  CHECK(parse_variant(to_string(Variant::Literal)) == Variant::Literal);
  CHECK_THROWS_AS((void)parse_variant("x"), ConfigError);
}
