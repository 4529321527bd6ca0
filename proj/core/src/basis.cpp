// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#include "zigzag/basis.hpp"

#include <array>
#include <string>

namespace zigzag {

namespace {

constexpr int kMaxN = 64;

const std::array<std::array<std::uint64_t, kMaxN + 1>, kMaxN + 1>& pascal() {
  static const auto table = [] {
    std::array<std::array<std::uint64_t, kMaxN + 1>, kMaxN + 1> t{};
    for (int n = 0; n <= kMaxN; ++n) {
      t[n][0] = 1;
      for (int k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0);
    }
    return t;
  }();
  return table;
}

// next integer with the same popcount (Gosper's hack)
Config next_same_popcount(Config v) {
  const Config t = v | (v - 1);
  return (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
}

}  // namespace

std::uint64_t binomial(int n, int k) noexcept {
  if (n < 0 || k < 0 || k > n || n > kMaxN) return 0;
  return pascal()[n][k];
}

BasisSector::BasisSector(int L, int N, std::uint64_t max_dim) : L_(L), N_(N) {
  if (L < 1 || L > 32) throw std::invalid_argument("BasisSector: L must lie in [1, 32]");
  if (N < 0 || N > L) throw std::invalid_argument("BasisSector: N must lie in [0, L]");
  const auto d = binomial(L, N);
  if (d > max_dim)
    throw std::invalid_argument("BasisSector: dimension " + std::to_string(d) +
                                " exceeds configured maximum " + std::to_string(max_dim));
  states_.reserve(d);
  if (N == 0) {
    states_.push_back(0);
  } else {
    Config c = (N == 32) ? ~Config{0} : ((Config{1} << N) - 1);
    for (std::uint64_t i = 0; i < d; ++i) {
      states_.push_back(c);
      if (i + 1 < d) c = next_same_popcount(c);
    }
  }

  // rank(c) = sum_i C(p_i, i + 1) over set bits p_0 < p_1 < ...
  lo_table_.assign(1u << 16, 0);
  for (std::uint32_t lo = 0; lo < (1u << 16); ++lo) {
    std::uint64_t r = 0;
    int i = 0;
    for (int b = 0; b < 16; ++b)
      if ((lo >> b) & 1u) r += binomial(b, ++i);
    lo_table_[lo] = static_cast<std::uint32_t>(r);
  }
  if (L > 16) {
    const std::uint32_t hi_count = 1u << (L - 16);
    hi_table_.assign(std::size_t{hi_count} * 17u, 0);
    for (std::uint32_t hi = 0; hi < hi_count; ++hi) {
      for (int k0 = 0; k0 <= 16; ++k0) {
        std::uint64_t r = 0;
        int i = k0;
        for (int b = 0; b < L - 16; ++b)
          if ((hi >> b) & 1u) r += binomial(16 + b, ++i);
        hi_table_[std::size_t{hi} * 17u + k0] = static_cast<std::uint32_t>(r);
      }
    }
  }
}

bool BasisSector::contains(Config c) const noexcept {
  if (L_ < 32 && (c >> L_) != 0) return false;
  return popcount(c) == N_;
}

StateIndex BasisSector::rank(Config c) const {
  if (!contains(c))
    throw std::domain_error("BasisSector::rank: configuration does not belong to sector (L=" +
                            std::to_string(L_) + ", N=" + std::to_string(N_) + ")");
  return rank_unchecked(c);
}

}  // namespace zigzag
