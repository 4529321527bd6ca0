// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#include "zigzag/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace zigzag::meanfield {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

}  // namespace

Eigen::Matrix2cd BlochModel::matrix(double k) const {
  // sum_m c^dag_{m+1} c_m -> e^{-ik} per mode, so a chain hop t e^{i phi}
  // gives 2 t cos(k - phi)
  const double t2 = -g * J;
  const double t1 = -(1.0 - g) * J;
  Eigen::Matrix2cd h;
  h(0, 0) = 2.0 * t2 * std::cos(k - 4.0 * kPi / 3.0);
  h(1, 1) = 2.0 * t2 * std::cos(k + 4.0 * kPi / 3.0);
  h(0, 1) = t1 * (1.0 + std::polar(1.0, -k));
  h(1, 0) = std::conj(h(0, 1));
  return h;
}

BandPair bands(const BlochModel& m, double k) {
  const auto h = m.matrix(k);
  const double mean = 0.5 * (h(0, 0).real() + h(1, 1).real());
  const double half = 0.5 * (h(0, 0).real() - h(1, 1).real());
  const double r = std::sqrt(half * half + std::norm(h(0, 1)));
  return {mean - r, mean + r};
}

std::vector<BandPair> bands(const BlochModel& m, std::span<const double> ks) {
  std::vector<BandPair> out;
  out.reserve(ks.size());
  for (double k : ks) out.push_back(bands(m, k));
  return out;
}

std::vector<double> k_grid(int n) {
  if (n < 1) throw std::invalid_argument("k_grid: need at least one point");
  std::vector<double> k(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) k[i] = -kPi + 2.0 * kPi * i / n;
  return k;
}

double fermi_level(const BlochModel& m, double filling, int nk) {
  if (!(filling > 0.0 && filling < 1.0)) throw std::invalid_argument("fermi_level: filling must be in (0, 1)");
  std::vector<double> e;
  e.reserve(2 * static_cast<std::size_t>(nk));
  for (double k : k_grid(nk)) {
    const auto b = bands(m, k);
    e.push_back(b.lower);
    e.push_back(b.upper);
  }
  std::sort(e.begin(), e.end());
  const auto n = std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(filling * e.size())), 1, e.size() - 1);
  return 0.5 * (e[n - 1] + e[n]);
}

FoldedBands fold(const BlochModel& m, int nq) {
  if (nq < 2) throw std::invalid_argument("fold: need at least two points");
  FoldedBands f;
  for (int i = 0; i < nq; ++i) {
    // cell midpoints keep both zone edges out; they are the same momentum
    const double q = -kPi / 2.0 + kPi * (i + 0.5) / nq;
    const auto a = bands(m, q);
    const auto b = bands(m, q + kPi);
    f.q.push_back(q);
    f.lower.push_back(a.lower);
    f.lower_shifted.push_back(b.lower);
    f.upper.push_back(a.upper);
    f.upper_shifted.push_back(b.upper);
  }
  return f;
}

bool lower_branches_cross(const BlochModel& m, int nq) {
  const auto f = fold(m, nq);
  bool neg = false;
  bool pos = false;
  for (std::size_t i = 0; i < f.q.size(); ++i) {
    const double d = f.lower[i] - f.lower_shifted[i];
    neg |= d < 0.0;
    pos |= d > 0.0;
  }
  return neg && pos;
}

std::optional<double> folded_crossing(double g_lo, double g_hi, double J, int nq, double tol) {
  if (!(g_lo < g_hi)) throw std::invalid_argument("folded_crossing: empty g range");
  auto cross = [&](double g) { return lower_branches_cross(BlochModel{g, J, 0.0}, nq); };
  if (cross(g_lo)) return g_lo;
  constexpr int coarse = 64;
  double prev = g_lo;
  for (int i = 1; i <= coarse; ++i) {
    const double g = g_lo + (g_hi - g_lo) * i / coarse;
    if (!cross(g)) {
      prev = g;
      continue;
    }
    double lo = prev;
    double hi = g;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      (cross(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  }
  return std::nullopt;
}

Eigen::MatrixXcd real_space_matrix(int L, double g, double J, Boundary b) {
  const bool pbc = b == Boundary::Periodic;
  if (L < 4 || (pbc && L % 4 != 0)) throw ConfigError("real_space_matrix: L must be >= 4 and a multiple of 4 for PBC");
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(L, L);
  auto hop = [&](int from, int d, cplx t) {
    int to = from + d;
    if (to >= L) {
      if (!pbc) return;
      to -= L;
    }
    h(to, from) += t;
    h(from, to) += std::conj(t);
  };
  for (int j = 0; j < L; ++j) {
    const double s = j % 2 == 0 ? 1.0 : -1.0;
    hop(j, 1, -(1.0 - g) * J);
    hop(j, 2, -g * J * std::polar(1.0, s * 4.0 * kPi / 3.0));
  }
  return h;
}

std::vector<double> slater_density(const Eigen::MatrixXcd& h, int N) {
  const auto L = h.rows();
  if (N < 0 || N > L) throw std::invalid_argument("slater_density: N outside [0, L]");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  std::vector<double> n(static_cast<std::size_t>(L), 0.0);
  for (int o = 0; o < N; ++o)
    for (Eigen::Index j = 0; j < L; ++j) n[j] += std::norm(es.eigenvectors()(j, o));
  return n;
}

}  // namespace zigzag::meanfield
