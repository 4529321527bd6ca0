#include <cmath>
#include <numeric>

#include "doctest.h"
#include "zigzag/eigensolver.hpp"
#include "zigzag/hamiltonian.hpp"

using namespace zigzag;

namespace {

SparseOperator small(std::initializer_list<std::initializer_list<cplx>> rows) {
  const auto n = rows.size();
  SparseOperator::Builder b(n);
  StateIndex r = 0;
  for (const auto& row : rows) {
    std::vector<SparseOperator::Entry> e;
    StateIndex c = 0;
    double d = 0.0;
    for (auto v : row) {
      if (c == r) d = v.real();
      else if (v != cplx{}) e.push_back({c, v});
      ++c;
    }
    b.push_row(d, e);
    ++r;
  }
  return b.finish();
}

SparseOperator model(int L, double g, double eta, Boundary bc) {
  auto p = ModelParams::half_filled(L, g, eta, bc);
  return build_boson(p, BasisSector(L, p.N));
}

}  // namespace

TEST_CASE("one by one") {
  const auto H = small({{cplx(-2.5)}});
  const auto r = lanczos_ground(H);
  REQUIRE(r.energies.size() == 1);
  CHECK(r.energies[0] == doctest::Approx(-2.5));
  CHECK(r.vectors[0][0] == cplx(1.0));
  const auto d = dense_spectrum(H);
  CHECK(d.energies[0] == doctest::Approx(-2.5));
}

TEST_CASE("pauli x") {
  const auto H = small({{0.0, 1.0}, {1.0, 0.0}});
  const auto d = dense_spectrum(H);
  CHECK(d.energies[0] == doctest::Approx(-1.0));
  CHECK(d.energies[1] == doctest::Approx(1.0));
  LanczosOptions o;
  o.k = 2;
  const auto r = lanczos_ground(H, o);
  CHECK(r.energies[0] == doctest::Approx(-1.0));
  CHECK(r.energies[1] == doctest::Approx(1.0));
}

TEST_CASE("lanczos agrees with dense diagonalization") {
  for (auto bc : {Boundary::Open, Boundary::Periodic})
    for (double g : {0.0, 0.3, 0.8, 2.0}) {
      CAPTURE(g);
      const auto H = model(8, g, 1.0, bc);
      const auto d = dense_spectrum(H);
      LanczosOptions o;
      o.k = 3;
      const auto r = lanczos_ground(H, o);
      CHECK(std::abs(r.energies[0] - d.energies[0]) < 1e-10);
      CHECK(r.energies[0] >= d.energies[0] - 1e-10);
      for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(r.energies[i] - d.energies[i]) < 1e-9);
      for (std::size_t i = 0; i < r.vectors.size(); ++i) {
        CHECK(r.residuals[i] < 1e-10 * r.spectral_width);
        for (std::size_t j = 0; j < r.vectors.size(); ++j) {
          const double want = i == j ? 1.0 : 0.0;
          CHECK(std::abs(dot(r.vectors[i], r.vectors[j]) - want) < 1e-10);
        }
      }
    }
}

TEST_CASE("larger sector against dense") {
  const auto H = model(12, 0.45, 1.0, Boundary::Open);
  const auto d = dense_spectrum(H);
  const auto r = lanczos_ground(H);
  CHECK(std::abs(r.energies[0] - d.energies[0]) < 1e-10);
  CHECK(std::abs(std::abs(dot(r.vectors[0], d.vectors[0])) - 1.0) < 1e-9);
}

TEST_CASE("dense spectrum trace identity and orthonormality") {
  const auto H = model(8, 0.6, 2.0, Boundary::Periodic);
  const auto d = dense_spectrum(H);
  double tr = 0.0;
  for (auto x : H.diagonal()) tr += x;
  CHECK(std::accumulate(d.energies.begin(), d.energies.end(), 0.0) == doctest::Approx(tr).epsilon(1e-12));
  CHECK(std::is_sorted(d.energies.begin(), d.energies.end()));
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j)
      CHECK(std::abs(dot(d.vectors[i], d.vectors[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
  CHECK_THROWS_AS((void)dense_spectrum(H, 10), std::invalid_argument);
}

TEST_CASE("seed changes the vector, not the energy") {
  const auto H = model(12, 0.5, 1.0, Boundary::Periodic);
  LanczosOptions a;
  a.seed = 1;
  LanczosOptions b;
  b.seed = 99;
  const auto ra = lanczos_ground(H, a);
  const auto rb = lanczos_ground(H, b);
  CHECK(std::abs(ra.energies[0] - rb.energies[0]) < 1e-10);
  CHECK(ra.seed == 1);
  // same seed, same bits
  const auto ra2 = lanczos_ground(H, a);
  CHECK(ra.vectors[0] == ra2.vectors[0]);
}

TEST_CASE("exact degeneracy is found and reported") {
  // two-fold ground level of the periodic chain past the level crossing
  const auto H = model(12, 0.6, 1.0, Boundary::Periodic);
  const auto d = dense_spectrum(H);
  REQUIRE(std::abs(d.energies[1] - d.energies[0]) < 1e-9);
  const auto r = lanczos_ground(H);
  CHECK(r.ground_multiplet == 2);
  REQUIRE(r.vectors.size() >= 2);
  CHECK(std::abs(dot(r.vectors[0], r.vectors[1])) < 1e-10);
  CHECK(std::abs(r.energies[1] - d.energies[0]) < 1e-10);
}

TEST_CASE("ordered phase multiplet is four-fold") {
  const auto H = model(12, 2.0, 1000.0, Boundary::Periodic);
  const auto r = lanczos_ground(H);
  CHECK(r.ground_multiplet == 4);
  const auto d = dense_spectrum(H);
  CHECK(d.ground_multiplet == 4);
}

TEST_CASE("non-degenerate ground state stays single") {
  const auto r = lanczos_ground(model(12, 0.3, 1.0, Boundary::Open));
  CHECK(r.ground_multiplet == 1);
  CHECK(r.vectors.size() == 1);
}

TEST_CASE("phase convention") {
  CVector v{cplx(0.1, 0.2), cplx(0.0, -0.9), cplx(0.3, 0.0)};
  fix_phase(v);
  CHECK(v[1].imag() == 0.0);
  CHECK(v[1].real() == doctest::Approx(0.9));
  CHECK(std::abs(v[0]) == doctest::Approx(std::abs(cplx(0.1, 0.2))));
}

TEST_CASE("iteration limit raises a solver failure") {
  const auto H = model(12, 0.5, 1.0, Boundary::Open);
  LanczosOptions o;
  o.max_iter = 5;
  o.basis_size = 4;
  CHECK_THROWS_AS((void)lanczos_ground(H, o), SolverFailure);
  try {
    (void)lanczos_ground(H, o);
  } catch (const SolverFailure& e) {
    CHECK(e.best_residual() > 0.0);
  }
  o = {};
  o.k = 0;
  CHECK_THROWS_AS((void)lanczos_ground(H, o), std::invalid_argument);
}
