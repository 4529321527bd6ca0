// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#include "zigzag/term_table.hpp"

#include <cmath>
#include <numbers>
#include <optional>

namespace zigzag {

namespace {

constexpr double kTwoPiThird = 2.0 * std::numbers::pi / 3.0;

class SiteMap {
 public:
  SiteMap(int L, bool periodic) : L_(L), periodic_(periodic) {}
  [[nodiscard]] std::optional<int> operator()(int x) const {
    if (periodic_) return ((x % L_) + L_) % L_;
    if (x < 0 || x >= L_) return std::nullopt;
    return x;
  }

 private:
  int L_;
  bool periodic_;
};

void push_pair(TermTable& t, int src, int dst, int range, std::initializer_list<int> empty, cplx amp) {
  HopTerm h;
  h.src = src;
  h.dst = dst;
  h.range = range;
  for (int k : empty) h.empty[h.n_empty++] = k;
  h.amp = amp;
  t.hops.push_back(h);
  std::swap(h.src, h.dst);
  h.amp = std::conj(amp);
  t.hops.push_back(h);
}

}  // namespace

cplx parity_phase(int j, double x) noexcept {
  const double s = (j % 2 == 0) ? 1.0 : -1.0;
  return std::polar(1.0, s * x);
}

double TermTable::diagonal(Config c) const noexcept {
  double e = 0.0;
  for (const auto& d : diag)
    if (occupied(c, d.site) && !occupied(c, d.other)) e += d.amp;
  return e;
}

TermTable build_terms(const ModelParams& p, int max_range) {
  const int L = p.L;
  const double J = p.J;
  const double g = p.g;
  const SiteMap S(L, p.periodic());
  TermTable t;
  t.L = L;

  for (int j = 0; j < L; ++j) {
    const auto s0 = *S(j);
    // j -> j+1
    if (max_range >= 1) {
      if (auto s1 = S(j + 1)) {
        push_pair(t, s0, *s1, 1, {}, -J);
        if (g != 0.0) {
          if (auto k = S(j - 1)) push_pair(t, s0, *s1, 1, {*k}, -2.0 * g * J * parity_phase(j, -kTwoPiThird));
          if (auto k = S(j + 2)) push_pair(t, s0, *s1, 1, {*k}, -2.0 * g * J * parity_phase(j, kTwoPiThird));
        }
      }
    }
    // j -> j+2
    if (max_range >= 2) {
      if (auto s2 = S(j + 2)) {
        push_pair(t, s0, *s2, 2, {}, -J);
        if (g != 0.0)
          push_pair(t, s0, *s2, 2, {*S(j + 1)}, -2.0 * g * J * parity_phase(j, 2.0 * kTwoPiThird));
      }
    }
    if (g == 0.0) continue;
    // j -> j+3
    if (max_range >= 3) {
      if (auto s3 = S(j + 3)) {
        push_pair(t, s0, *s3, 3, {*S(j + 1)}, -2.0 * g * J * parity_phase(j, -kTwoPiThird));
        push_pair(t, s0, *s3, 3, {*S(j + 2)}, -2.0 * g * J * parity_phase(j, kTwoPiThird));
      }
    }
    // j -> j+4
    if (max_range >= 4) {
      if (auto s4 = S(j + 4)) push_pair(t, s0, *s4, 4, {*S(j + 2)}, cplx(-2.0 * g * J));
    }
  }

  const double v = -2.0 * g * p.eta * J;
  if (v != 0.0) {
    for (int j = 0; j < L; ++j)
      for (int d : {-1, 1, -2, 2})
        if (auto k = S(j + d)) t.diag.push_back({j, *k, v});
  }
  return t;
}

}  // namespace zigzag
