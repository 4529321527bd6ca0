#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "doctest.h"
#include "zigzag/micro.hpp"

using namespace zigzag::micro;

namespace {

constexpr double pi = std::numbers::pi;

// Clebsch-Gordan table built from scratch: lower |J J> with J_-, orthogonalize
// the next highest-weight state against what is already there.
struct CG {
  double j1, j2;
  std::map<std::tuple<int, int, int, int>, double> c;  // (2J, 2M, 2m1, 2m2)

  CG(double a, double b) : j1(a), j2(b) {
    const int n1 = static_cast<int>(std::lround(2 * j1)) + 1;
    const int n2 = static_cast<int>(std::lround(2 * j2)) + 1;
    auto m1_of = [&](int i) { return j1 - i; };
    auto m2_of = [&](int i) { return j2 - i; };
    using Vec = std::vector<double>;  // product basis i1 * n2 + i2
    auto lower = [&](const Vec& v) {
      Vec out(v.size(), 0.0);
      for (int i1 = 0; i1 < n1; ++i1)
        for (int i2 = 0; i2 < n2; ++i2) {
          const double a0 = v[i1 * n2 + i2];
          if (a0 == 0.0) continue;
          const double m1 = m1_of(i1), m2 = m2_of(i2);
          if (i1 + 1 < n1) out[(i1 + 1) * n2 + i2] += a0 * std::sqrt(j1 * (j1 + 1) - m1 * (m1 - 1));
          if (i2 + 1 < n2) out[i1 * n2 + i2 + 1] += a0 * std::sqrt(j2 * (j2 + 1) - m2 * (m2 - 1));
        }
      double nn = 0;
      for (double x : out) nn += x * x;
      for (double& x : out) x /= std::sqrt(nn);
      return out;
    };
    std::map<int, std::vector<Vec>> by_m;  // 2M -> states already built
    for (double J = j1 + j2; J >= std::abs(j1 - j2) - 1e-9; J -= 1.0) {
      const int tM = static_cast<int>(std::lround(2 * J));
      Vec v(n1 * n2, 0.0);
      // start from any product state with M = J and project out existing ones
      for (int i1 = 0; i1 < n1; ++i1)
        for (int i2 = 0; i2 < n2; ++i2)
          if (std::lround(2 * (m1_of(i1) + m2_of(i2))) == tM) v[i1 * n2 + i2] = 1.0 + 0.1 * i1;
      for (const auto& w : by_m[tM]) {
        double d = 0;
        for (std::size_t k = 0; k < v.size(); ++k) d += v[k] * w[k];
        for (std::size_t k = 0; k < v.size(); ++k) v[k] -= d * w[k];
      }
      double nn = 0;
      for (double x : v) nn += x * x;
      for (double& x : v) x /= std::sqrt(nn);
      // Condon-Shortley: <j1 j1, j2 J-j1 | J J> > 0
      const int i2 = static_cast<int>(std::lround(j2 - (J - j1)));
      if (v[0 * n2 + i2] < 0)
        for (double& x : v) x = -x;
      for (double M = J; M >= -J - 1e-9; M -= 1.0) {
        by_m[static_cast<int>(std::lround(2 * M))].push_back(v);
        for (int i1 = 0; i1 < n1; ++i1)
          for (int k = 0; k < n2; ++k)
            c[{tM, static_cast<int>(std::lround(2 * M)), static_cast<int>(std::lround(2 * m1_of(i1))),
               static_cast<int>(std::lround(2 * m2_of(k)))}] = v[i1 * n2 + k];
        if (M - 1.0 >= -J - 1e-9) v = lower(v);
      }
    }
  }
  double get(double J, double M, double m1, double m2) const {
    auto it = c.find({static_cast<int>(std::lround(2 * J)), static_cast<int>(std::lround(2 * M)),
                      static_cast<int>(std::lround(2 * m1)), static_cast<int>(std::lround(2 * m2))});
    return it == c.end() ? 0.0 : it->second;
  }
};

double three_j_from_cg(double j1, double j2, double j3, double m1, double m2, double m3) {
  if (std::abs(m1 + m2 + m3) > 1e-9) return 0.0;
  const CG t(j1, j2);
  const double phase = std::lround(j1 - j2 - m3) % 2 == 0 ? 1.0 : -1.0;
  return phase / std::sqrt(2 * j3 + 1) * t.get(j3, -m3, m1, m2);
}

std::vector<double> range(double j) {
  std::vector<double> m;
  for (double x = -j; x <= j + 1e-9; x += 1.0) m.push_back(x);
  return m;
}

}  // namespace

TEST_CASE("3j against a Clebsch-Gordan construction") {
  CHECK(wigner3j(0.5, 0.5, 1, 0.5, -0.5, 0) == doctest::Approx(1 / std::sqrt(6.0)).epsilon(1e-14));
  const double js[][3] = {{0.5, 0.5, 1}, {1, 0.5, 1.5}, {1.5, 1, 0.5}, {2, 1, 2}, {1.5, 1.5, 2}, {2, 2, 3}};
  for (const auto& j : js)
    for (double m1 : range(j[0]))
      for (double m2 : range(j[1])) {
        const double m3 = -m1 - m2;
        if (std::abs(m3) > j[2]) continue;
        CAPTURE(j[0]);
        CAPTURE(m1);
        CAPTURE(m2);
        CHECK(wigner3j(j[0], j[1], j[2], m1, m2, m3) ==
              doctest::Approx(three_j_from_cg(j[0], j[1], j[2], m1, m2, m3)).epsilon(1e-12));
      }
}

TEST_CASE("3j selection rules, symmetries and orthogonality") {
  CHECK(wigner3j(1, 1, 1, 1, 0, 0) == 0.0);  // m sum
  CHECK(wigner3j(1, 1, 3, 0, 0, 0) == 0.0);  // triangle
  CHECK(wigner3j(1, 1, 1, 0, 0, 0) == 0.0);  // odd perimeter with zero m
  CHECK_THROWS_AS((void)wigner3j(0.3, 1, 1, 0, 0, 0), std::invalid_argument);

  std::mt19937 rng(1);
  for (int t = 0; t < 200; ++t) {
    const double j1 = std::uniform_int_distribution<int>(0, 8)(rng) / 2.0;
    const double j2 = std::uniform_int_distribution<int>(0, 8)(rng) / 2.0;
    const auto j3s = [&] {
      std::vector<double> v;
      for (double x = std::abs(j1 - j2); x <= j1 + j2 + 1e-9; x += 1.0) v.push_back(x);
      return v;
    }();
    const double j3 = j3s[std::uniform_int_distribution<std::size_t>(0, j3s.size() - 1)(rng)];
    const auto a = range(j1), b = range(j2);
    const double m1 = a[std::uniform_int_distribution<std::size_t>(0, a.size() - 1)(rng)];
    const double m2 = b[std::uniform_int_distribution<std::size_t>(0, b.size() - 1)(rng)];
    const double m3 = -m1 - m2;
    if (std::abs(m3) > j3) continue;
    const double w = wigner3j(j1, j2, j3, m1, m2, m3);
    const double sgn = std::lround(j1 + j2 + j3) % 2 == 0 ? 1.0 : -1.0;
    CHECK(wigner3j(j2, j3, j1, m2, m3, m1) == doctest::Approx(w));      // cyclic
    CHECK(wigner3j(j2, j1, j3, m2, m1, m3) == doctest::Approx(sgn * w));  // odd permutation
    CHECK(wigner3j(j1, j2, j3, -m1, -m2, -m3) == doctest::Approx(sgn * w));
  }
  for (double j3 : {0.0, 1.0, 2.0, 3.0}) {
    double s = 0;
    for (double m1 : range(1.5))
      for (double m2 : range(1.5)) {
        const double m3 = -m1 - m2;
        if (std::abs(m3) <= j3) s += (2 * j3 + 1) * std::pow(wigner3j(1.5, 1.5, j3, m1, m2, m3), 2);
      }
    CHECK(s == doctest::Approx(2 * j3 + 1).epsilon(1e-13));  // one per m3
  }
}

TEST_CASE("large arguments stay exact") {
  // (j j 0; m -m 0) = (-1)^{j-m} / sqrt(2j+1)
  const auto w = wigner3j_exact(40, 40, 0, 6, -6, 0);
  CHECK(w.sign == -1);
  CHECK(w.square == Rational(1, 41));
}

TEST_CASE("6j values") {
  CHECK(wigner6j(0, 0, 0, 0, 0, 0) == doctest::Approx(1.0));
  CHECK(wigner6j(1, 1, 3, 1, 1, 1) == 0.0);
  // {a b c; 0 c b} = (-1)^{a+b+c} / sqrt((2b+1)(2c+1))
  CHECK(wigner6j(1, 1.5, 0.5, 0, 0.5, 1.5) == doctest::Approx(-1.0 / std::sqrt(8.0)));
  CHECK(wigner6j(2, 1, 1, 0, 1, 1) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("6j from four 3j symbols") {
  const double cases[][6] = {{1, 1, 1, 1, 1, 1},     {0.5, 0.5, 1, 0.5, 0.5, 1}, {1, 1.5, 0.5, 1, 0.5, 1.5},
                             {2, 1, 1, 1, 1, 2},     {1.5, 1.5, 1, 0.5, 0.5, 1}, {2, 2, 2, 1, 1, 1},
                             {0, 1, 1, 0.5, 1.5, 0.5}};
  for (const auto& j : cases) {
    double s = 0;
    for (double m1 : range(j[0]))
      for (double m2 : range(j[1]))
        for (double m4 : range(j[3]))
          for (double m5 : range(j[4])) {
            const double m3 = -m1 - m2;
            const double m6 = m5 - m1;
            if (std::abs(m3) > j[2] || std::abs(m6) > j[5]) continue;
            const double e = j[0] + j[1] + j[2] + j[3] + j[4] + j[5] - (m1 + m2 + m3 + m4 + m5 + m6);
            const double ph = std::lround(e) % 2 == 0 ? 1.0 : -1.0;
            s += ph * wigner3j(j[0], j[1], j[2], -m1, -m2, -m3) * wigner3j(j[0], j[4], j[5], m1, -m5, m6) *
                 wigner3j(j[3], j[1], j[5], m4, m2, -m6) * wigner3j(j[3], j[4], j[2], -m4, m5, m3);
          }
    CAPTURE(j[0]);
    CHECK(wigner6j(j[0], j[1], j[2], j[3], j[4], j[5]) == doctest::Approx(s).epsilon(1e-12));
  }
}

TEST_CASE("dipole transition elements") {
  const auto t = transition_elements(LevelScheme{});
  CHECK(t[0] == SignedSqrt{1, Rational(1, 3)});   // 1/sqrt3
  CHECK(t[1] == SignedSqrt{-1, Rational(1, 9)});  // -1/3
  CHECK(t[2] == SignedSqrt{1, Rational(1, 9)});
  CHECK(t[3] == SignedSqrt{-1, Rational(1, 3)});
  const auto m = matching_schemes(t);
  REQUIRE(m.size() == 1);
  CHECK(m[0].level[2].two_M == 3);

  const AngularState s{1, 0, 1, 1}, p{1, 2, 3, 1};
  CHECK(dipole_element(s, p, +1).sign == 0);  // Delta M = 0 with the + component
  CHECK(dipole_element(s, s, -1).sign == 0);  // parity
  const AngularState other_spin{3, 2, 3, 1};
  CHECK(dipole_element(s, other_spin, 0).sign == 0);
  CHECK_THROWS_AS((void)dipole_element(s, p, 2), std::invalid_argument);
}

TEST_CASE("pair interaction") {
  TriangleSetup ts;
  const auto V = pair_interaction(ts, 0, 1);
  CHECK((V - V.adjoint()).norm() < 1e-15);
  CHECK(ts.J() == doctest::Approx(1.0 / 18.0));
  // <010|V|100> = -J
  CHECK(V(3 * 0 + 1, 3 * 1 + 0).real() == doctest::Approx(-ts.J()));
  auto shifted = ts;
  shifted.alpha += pi;
  const auto W = pair_interaction(shifted, 0, 1);
  CHECK((W - V).norm() < 1e-14);
  CHECK_THROWS_AS((void)pair_interaction(ts, 1, 1), std::invalid_argument);
  const auto H = three_atom_hamiltonian(ts);
  CHECK((H - H.adjoint()).norm() < 1e-14);
}

TEST_CASE("indirect hopping amplitude") {
  for (double alpha : {pi / 3, 0.3, 1.7}) {
    TriangleSetup ts;
    ts.alpha = alpha;
    const auto h = indirect_amplitude(ts, 0, 1, 2);
    const double J = ts.J();
    CHECK(std::abs(h - 27 * J * J * std::polar(1.0, -4 * alpha)) < 1e-12);
  }
  TriangleSetup ts;
  CHECK(indirect_amplitude(ts, 0, 1, 0).real() == doctest::Approx(27 * ts.J() * ts.J()));
}

TEST_CASE("effective model equals the triangle model") {
  TriangleSetup ts;
  ts.delta = 40.0;
  const auto He = adiabatic_eliminate(ts);
  CHECK((He - He.adjoint()).norm() < 1e-15);
  const auto T = triangle_model(ts.J(), ts.g(), ts.alpha);
  CHECK((T - T.adjoint()).norm() < 1e-15);
  const int one[3] = {1, 2, 4};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) CHECK(std::abs(He(a, b) - T(one[a], one[b])) < 1e-12);
  // ratio of mediated to direct amplitude is 2g in magnitude
  CHECK(std::abs(He(2, 0) + ts.J()) / ts.J() == doctest::Approx(2 * ts.g()));
  CHECK(ts.g() == doctest::Approx(27 * ts.J() / (2 * ts.delta)));

  // two excitations: the only hop left is the direct one
  const int two[3] = {3, 5, 6};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (a != b) CHECK(std::abs(T(two[a], two[b]) + ts.J()) < 1e-15);
  // alpha = pi/3 gives the Peierls factor e^{-4 pi i/3} on the 1 -> 3 hop
  CHECK(std::abs((T(4, 1) + ts.J()) / (-2 * ts.g() * ts.J()) - std::polar(1.0, -4 * pi / 3)) < 1e-14);
}

TEST_CASE("elimination error falls as 1/Delta^2") {
  TriangleSetup ts;
  std::vector<double> d;
  for (int i = 0; i < 6; ++i) d.push_back(ts.J() * 1000 * std::pow(10.0, i / 5.0));
  const auto pts = elimination_scan(ts, d);
  CHECK(std::abs(loglog_slope(pts) + 2.0) < 0.1);
  // halving 1/Delta quarters the deviation
  ts.delta = d[0];
  const auto a = elimination_scan(ts, {d[0], 2 * d[0]});
  CHECK(a[0].error / a[1].error == doctest::Approx(4.0).epsilon(0.05));
  CHECK_THROWS_AS((void)adiabatic_eliminate(TriangleSetup{1.0, pi / 3, 0.0}), std::invalid_argument);
}
