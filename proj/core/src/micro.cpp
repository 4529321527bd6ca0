// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#include "zigzag/micro.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace zigzag::micro {

namespace {

using boost::multiprecision::cpp_int;

const cpp_int& factorial(int n) {
  static const std::vector<cpp_int> table = [] {
    std::vector<cpp_int> t(256);
    t[0] = 1;
    for (int i = 1; i < 256; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  if (n < 0 || n >= 256) throw std::out_of_range("factorial argument out of range");
  return table[n];
}

bool odd(int n) { return (n % 2) != 0; }

// triangle condition on doubled values, including integer perimeter
bool triad(int a, int b, int c) {
  if (a < 0 || b < 0 || c < 0) return false;
  if (odd(a + b + c)) return false;
  return c >= std::abs(a - b) && c <= a + b;
}

Rational delta(int a, int b, int c) {
  return Rational(factorial((a + b - c) / 2) * factorial((a - b + c) / 2) * factorial((-a + b + c) / 2),
                  factorial((a + b + c) / 2 + 1));
}

SignedSqrt from_sum(int phase_sign, const Rational& pref, const Rational& sum) {
  if (sum == 0) return {};
  return {sum > 0 ? phase_sign : -phase_sign, pref * sum * sum};
}

int to_doubled(double x) {
  const double t = 2.0 * x;
  const double r = std::round(t);
  if (std::abs(t - r) > 1e-9) throw std::invalid_argument("angular momentum must be a multiple of 1/2");
  return static_cast<int>(r);
}

constexpr double kPi = 3.14159265358979323846;

int level_index(int l0, int l1, int l2) { return 9 * l0 + 3 * l1 + l2; }

int excited_on(int site, int level) {
  std::array<int, 3> l{0, 0, 0};
  l[site] = level;
  return level_index(l[0], l[1], l[2]);
}

}  // namespace

double SignedSqrt::value() const {
  if (sign == 0) return 0.0;
  return sign * std::sqrt(static_cast<double>(square));
}

SignedSqrt operator*(const SignedSqrt& a, const SignedSqrt& b) {
  if (a.sign == 0 || b.sign == 0) return {};
  return {a.sign * b.sign, a.square * b.square};
}

SignedSqrt wigner3j_exact(int j1, int j2, int j3, int m1, int m2, int m3) {
  if (j1 < 0 || j2 < 0 || j3 < 0) throw std::invalid_argument("wigner3j: negative j");
  if (odd(j1 + m1) || odd(j2 + m2) || odd(j3 + m3)) return {};
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return {};
  if (m1 + m2 + m3 != 0) return {};
  if (!triad(j1, j2, j3)) return {};

  Rational pref = delta(j1, j2, j3);
  for (auto [j, m] : {std::pair{j1, m1}, {j2, m2}, {j3, m3}})
    pref *= factorial((j + m) / 2) * factorial((j - m) / 2);

  // halved integer arguments of the Racah sum
  const int a = (j3 - j2 + m1) / 2;
  const int b = (j3 - j1 - m2) / 2;
  const int c = (j1 + j2 - j3) / 2;
  const int d = (j1 - m1) / 2;
  const int e = (j2 + m2) / 2;
  const int kmin = std::max({0, -a, -b});
  const int kmax = std::min({c, d, e});
  Rational sum = 0;
  for (int k = kmin; k <= kmax; ++k) {
    const cpp_int den = factorial(k) * factorial(a + k) * factorial(b + k) * factorial(c - k) * factorial(d - k) *
                        factorial(e - k);
    sum += Rational(odd(k) ? -1 : 1, den);
  }
  const int phase = odd((j1 - j2 - m3) / 2) ? -1 : 1;
  return from_sum(phase, pref, sum);
}

SignedSqrt wigner6j_exact(int j1, int j2, int j3, int j4, int j5, int j6) {
  if (j1 < 0 || j2 < 0 || j3 < 0 || j4 < 0 || j5 < 0 || j6 < 0) throw std::invalid_argument("wigner6j: negative j");
  if (!triad(j1, j2, j3) || !triad(j1, j5, j6) || !triad(j4, j2, j6) || !triad(j4, j5, j3)) return {};
  const Rational pref = delta(j1, j2, j3) * delta(j1, j5, j6) * delta(j4, j2, j6) * delta(j4, j5, j3);
  const int a1 = (j1 + j2 + j3) / 2;
  const int a2 = (j1 + j5 + j6) / 2;
  const int a3 = (j4 + j2 + j6) / 2;
  const int a4 = (j4 + j5 + j3) / 2;
  const int b1 = (j1 + j2 + j4 + j5) / 2;
  const int b2 = (j2 + j3 + j5 + j6) / 2;
  const int b3 = (j3 + j1 + j6 + j4) / 2;
  const int tmin = std::max({a1, a2, a3, a4});
  const int tmax = std::min({b1, b2, b3});
  Rational sum = 0;
  for (int t = tmin; t <= tmax; ++t) {
    const cpp_int den = factorial(t - a1) * factorial(t - a2) * factorial(t - a3) * factorial(t - a4) *
                        factorial(b1 - t) * factorial(b2 - t) * factorial(b3 - t);
    sum += Rational(odd(t) ? -factorial(t + 1) : factorial(t + 1), den);
  }
  return from_sum(1, pref, sum);
}

double wigner3j(double j1, double j2, double j3, double m1, double m2, double m3) {
  return wigner3j_exact(to_doubled(j1), to_doubled(j2), to_doubled(j3), to_doubled(m1), to_doubled(m2),
                        to_doubled(m3))
      .value();
}

double wigner6j(double j1, double j2, double j3, double j4, double j5, double j6) {
  return wigner6j_exact(to_doubled(j1), to_doubled(j2), to_doubled(j3), to_doubled(j4), to_doubled(j5),
                        to_doubled(j6))
      .value();
}

bool AngularState::valid() const noexcept {
  if (two_S < 0 || two_L < 0 || odd(two_L) || two_J < 0) return false;
  if (!triad(two_L, two_S, two_J)) return false;
  return std::abs(two_M) <= two_J && !odd(two_J + two_M);
}

SignedSqrt spherical_element(const AngularState& a, const AngularState& b, int k, int p) {
  if (!a.valid() || !b.valid()) throw std::invalid_argument("spherical_element: invalid angular state");
  if (a.two_S != b.two_S) return {};
  const Rational dims = Rational((a.two_J + 1) * (b.two_J + 1)) * (a.two_L + 1) * (b.two_L + 1);
  const SignedSqrt norm{odd((a.two_M - a.two_S) / 2) ? -1 : 1, dims};
  return norm * wigner3j_exact(a.two_J, b.two_J, 2 * k, -a.two_M, b.two_M, 2 * p) *
         wigner3j_exact(a.two_L, 2 * k, b.two_L, 0, 0, 0) *
         wigner6j_exact(a.two_L, b.two_L, 2 * k, b.two_J, a.two_J, a.two_S);
}

SignedSqrt dipole_element(const AngularState& a, const AngularState& b, int component) {
  if (component < -1 || component > 1) throw std::invalid_argument("dipole_element: component must be -1, 0 or +1");
  auto c = spherical_element(a, b, 1, component);
  c.sign = -c.sign;  // charge -e
  return c;
}

std::array<SignedSqrt, 4> transition_elements(const LevelScheme& s) {
  const auto& [zero, one, plus] = s.level;
  return {dipole_element(zero, plus, -1), dipole_element(one, zero, -1), dipole_element(zero, one, +1),
          dipole_element(plus, zero, +1)};
}

std::vector<LevelScheme> matching_schemes(const std::array<SignedSqrt, 4>& target) {
  std::vector<AngularState> pool;
  for (int m : {-1, 1}) pool.push_back({1, 0, 1, m});
  for (int m : {-3, -1, 1, 3}) pool.push_back({1, 2, 3, m});
  std::vector<LevelScheme> out;
  for (const auto& a : pool)
    for (const auto& b : pool)
      for (const auto& c : pool) {
        LevelScheme s;
        s.level = {a, b, c};
        if (transition_elements(s) == target) out.push_back(s);
      }
  return out;
}

Eigen::Matrix3cd dipole_matrix(const LevelScheme& s, int component) {
  Eigen::Matrix3cd d;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) d(r, c) = dipole_element(s.level[r], s.level[c], component).value();
  return d;
}

double TriangleSetup::angle(int i, int j) const {
  if (i == j) throw std::invalid_argument("pair_interaction: coincident atoms");
  if (i < 0 || j < 0 || i > 2 || j > 2) throw std::out_of_range("triangle has atoms 0, 1, 2");
  const int a = std::min(i, j);
  const int b = std::max(i, j);
  double phi = 0.0;
  if (a == 0 && b == 1) phi = alpha;
  if (a == 1 && b == 2) phi = -alpha;
  return i < j ? phi : phi + kPi;
}

double TriangleSetup::J() const {
  const auto V = pair_interaction(*this, 0, 1);
  return -V(3 * 0 + 1, 3 * 1 + 0).real();
}

double TriangleSetup::g() const {
  if (delta == 0.0) throw std::invalid_argument("detuning must be nonzero");
  return 27.0 * J() / (2.0 * delta);
}

Eigen::MatrixXcd pair_interaction(const TriangleSetup& s, int i, int j) {
  const double phi = s.angle(i, j);
  const auto dz = dipole_matrix(s.levels, 0);
  const auto dp = dipole_matrix(s.levels, +1);
  const auto dm = dipole_matrix(s.levels, -1);
  auto kron = [](const Eigen::Matrix3cd& A, const Eigen::Matrix3cd& B) {
    Eigen::MatrixXcd K(9, 9);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) K.block(3 * a, 3 * b, 3, 3) = A(a, b) * B;
    return K;
  };
  const cplx e2 = std::polar(1.0, 2.0 * phi);
  Eigen::MatrixXcd V = kron(dz, dz) + 0.5 * (kron(dp, dm) + kron(dm, dp)) -
                       1.5 * (kron(dp, dp) * std::conj(e2) + kron(dm, dm) * e2);
  return s.coupling * V;
}

Eigen::MatrixXcd three_atom_hamiltonian(const TriangleSetup& s) {
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(27, 27);
  for (int st = 0; st < 27; ++st) {
    const std::array<int, 3> l{st / 9, (st / 3) % 3, st % 3};
    for (int x : l) H(st, st) += x == 1 ? s.omega : x == 2 ? s.omega + s.delta : 0.0;
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const auto V = pair_interaction(s, i, j);
      const int spectator = 3 - i - j;
      for (int st = 0; st < 27; ++st) {
        const std::array<int, 3> l{st / 9, (st / 3) % 3, st % 3};
        for (int li = 0; li < 3; ++li)
          for (int lj = 0; lj < 3; ++lj) {
            const cplx v = V(3 * li + lj, 3 * l[i] + l[j]);
            if (v == cplx{}) continue;
            std::array<int, 3> o{};
            o[i] = li;
            o[j] = lj;
            o[spectator] = l[spectator];
            H(level_index(o[0], o[1], o[2]), st) += v;
          }
      }
    }
  return H;
}

cplx indirect_amplitude(const TriangleSetup& s, int i, int j, int k) {
  const auto H = three_atom_hamiltonian(s);
  const int in = excited_on(i, 1);
  const int mid = excited_on(j, 2);
  const int out = excited_on(k, 1);
  return H(out, mid) * H(mid, in);
}

Eigen::Matrix3cd adiabatic_eliminate(const TriangleSetup& s) {
  if (s.delta == 0.0) throw std::invalid_argument("adiabatic_eliminate: zero detuning");
  const auto H = three_atom_hamiltonian(s);
  Eigen::Matrix3cd Hpp, Hpq, Hqp;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      Hpp(a, b) = H(excited_on(a, 1), excited_on(b, 1));
      Hpq(a, b) = H(excited_on(a, 1), excited_on(b, 2));
      Hqp(a, b) = H(excited_on(a, 2), excited_on(b, 1));
    }
  Hpp -= s.omega * Eigen::Matrix3cd::Identity();
  return Hpp - Hpq * Hqp / s.delta;
}

std::array<double, 3> exact_single_excitation(const TriangleSetup& s) {
  if (!(s.delta > 0.0)) throw std::invalid_argument("exact_single_excitation: needs a positive detuning");
  const auto H = three_atom_hamiltonian(s);
  std::array<int, 6> idx{};
  for (int a = 0; a < 3; ++a) {
    idx[a] = excited_on(a, 1);
    idx[3 + a] = excited_on(a, 2);
  }
  Eigen::MatrixXcd B(6, 6);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) B(r, c) = H(idx[r], idx[c]);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(B);
  return {es.eigenvalues()(0) - s.omega, es.eigenvalues()(1) - s.omega, es.eigenvalues()(2) - s.omega};
}

Eigen::MatrixXcd triangle_model(double J, double g, double alpha) {
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(8, 8);
  auto n = [](int c, int i) { return (c >> i) & 1; };
  auto levi = [](int i, int j, int k) { return (i + 1) % 3 == j && (j + 1) % 3 == k ? 1 : -1; };
  for (int c = 0; c < 8; ++c) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        if (i == j || !n(c, j) || n(c, i)) continue;
        const int t = c ^ (1 << i) ^ (1 << j);
        // b^dag_i b_j: direct, then mediated by the third site k when it is empty
        H(t, c) += -J;
        const int k = 3 - i - j;
        if (!n(c, k)) H(t, c) += -2.0 * g * J * std::polar(1.0, -4.0 * levi(i, j, k) * alpha);
      }
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k)
        if (i != k) H(c, c) += -2.0 * g * J * n(c, i) * (1 - n(c, k));
  }
  return H;
}

std::vector<EliminationPoint> elimination_scan(TriangleSetup s, const std::vector<double>& deltas) {
  std::vector<EliminationPoint> out;
  for (double d : deltas) {
    s.delta = d;
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(adiabatic_eliminate(s));
    const auto ex = exact_single_excitation(s);
    double err = 0.0;
    for (int i = 0; i < 3; ++i) err = std::max(err, std::abs(es.eigenvalues()(i) - ex[i]));
    out.push_back({d, err / s.J()});
  }
  return out;
}

double loglog_slope(const std::vector<EliminationPoint>& pts) {
  if (pts.size() < 2) throw std::invalid_argument("loglog_slope: need two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& p : pts) {
    const double x = std::log(p.delta);
    const double y = std::log(p.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace zigzag::micro
