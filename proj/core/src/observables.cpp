// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#include "zigzag/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace zigzag {

namespace {

constexpr double kPi = std::numbers::pi;

void check_state(const BasisSector& sector, State psi) {
  if (psi.size() != sector.dim())
    throw std::invalid_argument("state has " + std::to_string(psi.size()) + " amplitudes, sector has " +
                                std::to_string(sector.dim()));
}

int wrap(int x, int L) { return ((x % L) + L) % L; }

Config bit(int site) { return Config{1} << site; }

}  // namespace

std::vector<double> density(const BasisSector& sector, State psi) {
  check_state(sector, psi);
  std::vector<double> n(static_cast<std::size_t>(sector.sites()), 0.0);
  for (std::size_t r = 0; r < sector.dim(); ++r) {
    const double w = std::norm(psi[r]);
    if (w == 0.0) continue;
    for (Config c = sector[static_cast<StateIndex>(r)]; c; c &= c - 1) n[std::countr_zero(c)] += w;
  }
  return n;
}

double density_density(const BasisSector& sector, State psi, int i, int j) {
  check_state(sector, psi);
  const Config m = bit(i) | bit(j);
  double s = 0.0;
  for (std::size_t r = 0; r < sector.dim(); ++r)
    if ((sector[static_cast<StateIndex>(r)] & m) == m) s += std::norm(psi[r]);
  return s;
}

namespace {

// <n_i n_j> for all pairs in one pass
Eigen::MatrixXd nn_matrix(const BasisSector& sector, State psi) {
  const int L = sector.sites();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(L, L);
  std::vector<int> occ;
  for (std::size_t r = 0; r < sector.dim(); ++r) {
    const double w = std::norm(psi[r]);
    if (w == 0.0) continue;
    occ.clear();
    for (Config c = sector[static_cast<StateIndex>(r)]; c; c &= c - 1) occ.push_back(std::countr_zero(c));
    for (int a : occ)
      for (int b : occ) m(a, b) += w;
  }
  return m;
}

std::vector<double> g2_from(const Eigen::MatrixXd& nn, const std::vector<double>& n, bool periodic) {
  const int L = static_cast<int>(n.size());
  std::vector<double> out(static_cast<std::size_t>(L), 0.0);
  for (int d = 0; d < L; ++d) {
    if (periodic) {
      out[d] = nn(0, d) - n[0] * n[d];
    } else {
      double s = 0.0;
      for (int i = 0; i + d < L; ++i) s += nn(i, i + d) - n[i] * n[i + d];
      out[d] = s / (L - d);
    }
  }
  return out;
}

}  // namespace

std::vector<double> g2(const BasisSector& sector, State psi, bool periodic) {
  check_state(sector, psi);
  return g2_from(nn_matrix(sector, psi), density(sector, psi), periodic);
}

std::vector<double> g2_mixture(const BasisSector& sector, const std::vector<CVector>& states, bool periodic) {
  if (states.empty()) throw std::invalid_argument("g2_mixture: no states");
  const int L = sector.sites();
  Eigen::MatrixXd nn = Eigen::MatrixXd::Zero(L, L);
  std::vector<double> n(static_cast<std::size_t>(L), 0.0);
  for (const auto& s : states) {
    check_state(sector, s);
    nn += nn_matrix(sector, s);
    const auto d = density(sector, s);
    for (int i = 0; i < L; ++i) n[i] += d[i];
  }
  const double w = 1.0 / static_cast<double>(states.size());
  nn *= w;
  for (auto& x : n) x *= w;
  return g2_from(nn, n, periodic);
}

cplx corr1(const BasisSector& sector, State psi, int k, int l, Config empty) {
  check_state(sector, psi);
  const int L = sector.sites();
  if (k < 0 || k >= L || l < 0 || l >= L) throw std::out_of_range("corr1: site out of range");
  cplx s = 0.0;
  if (k == l) {
    for (std::size_t r = 0; r < sector.dim(); ++r) {
      const Config c = sector[static_cast<StateIndex>(r)];
      if ((c & bit(k)) && !(c & empty)) s += std::norm(psi[r]);
    }
    return s;
  }
  // b^dag_k (...) b_l moves a particle l -> k
  const Config need = bit(l);
  const Config hole = bit(k) | (empty & ~bit(l) & ~bit(k));
  for (std::size_t r = 0; r < sector.dim(); ++r) {
    const Config c = sector[static_cast<StateIndex>(r)];
    if (!(c & need) || (c & hole)) continue;
    const auto t = sector.rank_unchecked(c ^ need ^ bit(k));
    s += std::conj(psi[t]) * psi[r];
  }
  return s;
}

Eigen::MatrixXcd corr1_matrix(const BasisSector& sector, State psi) {
  const int L = sector.sites();
  Eigen::MatrixXcd m(L, L);
  const auto n = density(sector, psi);
  for (int k = 0; k < L; ++k) {
    m(k, k) = n[k];
    for (int l = k + 1; l < L; ++l) {
      m(k, l) = corr1(sector, psi, k, l);
      m(l, k) = std::conj(m(k, l));
    }
  }
  return m;
}

SpinCorrelation spin_correlation(const BasisSector& sector, State psi, int k, int l) {
  const cplx c = corr1(sector, psi, k, l);
  return {c.real(), c.imag()};
}

double bond_current(const BasisSector& sector, State psi, const TermTable& terms, int src, int dst,
                    CurrentConvention conv) {
  check_state(sector, psi);
  const double cond_weight = conv == CurrentConvention::Formula ? 0.5 : 1.0;
  double I = 0.0;
  bool found = false;
  for (const auto& h : terms.hops) {
    if (h.src != src || h.dst != dst) continue;
    found = true;
    Config empty = 0;
    for (int i = 0; i < h.n_empty; ++i) empty |= bit(h.empty[i]);
    // amp is the coefficient of b^dag_dst b_src; the inflow into dst is
    // 2 Im(amp <b^dag_dst b_src>)
    const cplx y = corr1(sector, psi, dst, src, empty);
    const double w = h.n_empty > 0 ? cond_weight : 1.0;
    I += w * 2.0 * std::imag(h.amp * y);
  }
  if (!found) throw std::out_of_range("no hop terms on bond " + std::to_string(src) + " -> " + std::to_string(dst));
  return I;
}

namespace {

double range_current(const BasisSector& sector, State psi, const ModelParams& p, int j, int d,
                     CurrentConvention conv) {
  const int L = p.L;
  if (j < 0 || j >= L) throw std::out_of_range("bond index out of range");
  if (!p.periodic() && j + d >= L) throw std::out_of_range("bond beyond the open edge");
  const auto terms = build_terms(p, d);
  return bond_current(sector, psi, terms, j, wrap(j + d, L), conv);
}

}  // namespace

double current_nnn(const BasisSector& sector, State psi, const ModelParams& p, int j, CurrentConvention conv) {
  return range_current(sector, psi, p, j, 2, conv);
}

double current_nn(const BasisSector& sector, State psi, const ModelParams& p, int j, CurrentConvention conv) {
  return range_current(sector, psi, p, j, 1, conv);
}

std::vector<double> current_divergence(const SparseOperator& H, const BasisSector& sector, State psi) {
  check_state(sector, psi);
  if (H.dim() != sector.dim()) throw std::invalid_argument("operator and sector dimensions differ");
  std::vector<double> div(static_cast<std::size_t>(sector.sites()), 0.0);
  // <i[H, n_j]> = sum_{r,c} -Im(conj(psi_r) H_rc psi_c) (n_j(c) - n_j(r))
  H.for_each_offdiag([&](StateIndex r, StateIndex c, cplx h) {
    const double v = -std::imag(std::conj(psi[r]) * h * psi[c]);
    if (v == 0.0) return;
    const Config a = sector[r];
    const Config b = sector[c];
    for (Config x = b & ~a; x; x &= x - 1) div[std::countr_zero(x)] += v;
    for (Config x = a & ~b; x; x &= x - 1) div[std::countr_zero(x)] -= v;
  });
  return div;
}

std::vector<double> divergence_from_bonds(const BasisSector& sector, State psi, const TermTable& terms) {
  std::vector<double> div(static_cast<std::size_t>(sector.sites()), 0.0);
  std::vector<std::pair<int, int>> bonds;
  for (const auto& h : terms.hops) {
    const std::pair key{h.src, h.dst};
    if (std::find(bonds.begin(), bonds.end(), key) == bonds.end()) bonds.push_back(key);
  }
  for (const auto& [src, dst] : bonds) {
    // each directed term's inflow into dst; the reverse term covers the other direction
    const double I = bond_current(sector, psi, terms, src, dst, CurrentConvention::Continuity);
    div[dst] += 0.5 * I;
    div[src] -= 0.5 * I;
  }
  return div;
}

bool plaquette_valid(int L, bool periodic, int j) noexcept {
  if (periodic) return j >= 0 && j < L;
  return j - 1 >= 0 && j + 4 < L;
}

double flux_density_form(Config c, int L, int j) {
  auto n = [&](int x) { return occupied(c, wrap(x, L)) ? 1.0 : 0.0; };
  return kPi / 3.0 * (n(j + 1) + n(j + 2) - n(j - 1) - n(j + 4));
}

double link_phase(Config c, int L, int b, int d) {
  auto n = [&](int x) { return occupied(c, wrap(x, L)) ? 1.0 : 0.0; };
  const double s = (wrap(b, L) % 2 == 0) ? 1.0 : -1.0;
  if (d == 1) return kPi + s * kPi / 3.0 * (n(b + 2) - n(b - 1));  // U = -exp(+-i pi/3 (n_{b+2} - n_{b-1}))
  if (d == 2) return -s * kPi / 3.0;
  throw std::invalid_argument("link_phase: d must be 1 or 2");
}

double flux_phase_sum(Config c, int L, int j) {
  const double s = (wrap(j, L) % 2 == 0) ? 1.0 : -1.0;
  const double sum = link_phase(c, L, j, 2) + link_phase(c, L, j + 2, 1) - link_phase(c, L, j + 1, 2) -
                     link_phase(c, L, j, 1);
  return -s * sum;
}

FluxMoments plaquette_flux(const BasisSector& sector, State psi, bool periodic, int j) {
  check_state(sector, psi);
  const int L = sector.sites();
  if (!plaquette_valid(L, periodic, j)) throw std::out_of_range("plaquette " + std::to_string(j) + " not inside");
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t r = 0; r < sector.dim(); ++r) {
    const double w = std::norm(psi[r]);
    if (w == 0.0) continue;
    const double f = flux_density_form(sector[static_cast<StateIndex>(r)], L, j);
    m1 += w * f;
    m2 += w * f * f;
  }
  return {m1, m2 - m1 * m1};
}

double chi_from_fluxes(const std::vector<std::optional<double>>& flux_mean, int L, bool periodic) {
  int first = -1;
  int last = -1;
  for (int j = 0; j < L; ++j)
    if (flux_mean.at(j)) {
      if (first < 0) first = j;
      last = j;
    }
  if (first < 0) throw std::invalid_argument("chi: no plaquettes");
  auto usable = [&](int j) {
    if (j >= L || !flux_mean[j]) return false;
    return periodic || (j != first && j != last);
  };
  double s = 0.0;
  int pairs = 0;
  for (int j = 0; j < L; j += 2) {
    if (!usable(j) || !usable(j + 1)) continue;
    s += ((j / 2) % 2 == 0 ? 1.0 : -1.0) * (*flux_mean[j] + *flux_mean[j + 1]);
    ++pairs;
  }
  if (pairs == 0) throw std::invalid_argument("chi: system too short for an interior plaquette pair");
  return std::abs(s / L);
}

double chi_order(const BasisSector& sector, State psi, bool periodic) {
  const int L = sector.sites();
  const auto n = density(sector, psi);
  std::vector<std::optional<double>> flux(static_cast<std::size_t>(L));
  for (int j = 0; j < L; ++j)
    if (plaquette_valid(L, periodic, j))
      flux[j] = kPi / 3.0 * (n[wrap(j + 1, L)] + n[wrap(j + 2, L)] - n[wrap(j - 1, L)] - n[wrap(j + 4, L)]);
  return chi_from_fluxes(flux, L, periodic);
}

double fidelity(State a, State b, double dl, int N) {
  if (a.size() != b.size()) throw std::invalid_argument("fidelity: states from different sectors");
  if (dl == 0.0) throw std::invalid_argument("fidelity: zero parameter step");
  if (N <= 0) throw std::invalid_argument("fidelity: N must be positive");
  cplx o = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) o += std::conj(a[i]) * b[i];
  return 2.0 / N * (1.0 - std::abs(o)) / (dl * dl);
}

double subspace_overlap(const std::vector<CVector>& a, const std::vector<CVector>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("subspace_overlap: empty multiplet");
  const auto da = static_cast<Eigen::Index>(a.size());
  const auto db = static_cast<Eigen::Index>(b.size());
  Eigen::MatrixXcd M(da, db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < db; ++j) {
      if (a[i].size() != b[j].size()) throw std::invalid_argument("subspace_overlap: mismatched sectors");
      cplx s = 0.0;
      for (std::size_t r = 0; r < a[i].size(); ++r) s += std::conj(a[i][r]) * b[j][r];
      M(i, j) = s;
    }
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  const auto d = std::min(da, db);
  double logp = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) logp += std::log(std::max(svd.singularValues()(i), 1e-300));
  return std::exp(logp / static_cast<double>(d));
}

double fidelity(const std::vector<CVector>& a, const std::vector<CVector>& b, double dl, int N) {
  if (dl == 0.0) throw std::invalid_argument("fidelity: zero parameter step");
  if (N <= 0) throw std::invalid_argument("fidelity: N must be positive");
  return 2.0 / N * (1.0 - std::min(1.0, subspace_overlap(a, b))) / (dl * dl);
}

}  // namespace zigzag
