// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace zigzag {

/// Occupation pattern of up to 32 sites; bit j is n_j.
using Config = std::uint32_t;
/// Position of a configuration inside its sector.
using StateIndex = std::uint32_t;

/// Binomial coefficient C(n, k) for 0 <= k, n <= 64 (0 outside that range).
[[nodiscard]] std::uint64_t binomial(int n, int k) noexcept;

[[nodiscard]] inline bool occupied(Config c, int site) noexcept { return (c >> site) & 1u; }
[[nodiscard]] inline int popcount(Config c) noexcept { return std::popcount(c); }

/**
 * Fixed particle-number block of the hard-core boson Hilbert space.
 *
 * States are stored in increasing integer order. Ranking uses the
 * combinatorial number system, evaluated through two 16-bit lookup tables
 * so that rank() is O(1).
 */
class BasisSector {
 public:
  /// Largest sector we are willing to enumerate in memory.
  static constexpr std::uint64_t default_max_dim = std::uint64_t{1} << 28;

  BasisSector(int L, int N, std::uint64_t max_dim = default_max_dim);

  [[nodiscard]] int sites() const noexcept { return L_; }
  [[nodiscard]] int particles() const noexcept { return N_; }
  [[nodiscard]] std::size_t dim() const noexcept { return states_.size(); }
  [[nodiscard]] std::span<const Config> states() const noexcept { return states_; }
  [[nodiscard]] Config unrank(StateIndex i) const { return states_.at(i); }
  [[nodiscard]] Config operator[](StateIndex i) const noexcept { return states_[i]; }

  /// Throws std::domain_error when `c` has the wrong particle number or sites.
  [[nodiscard]] StateIndex rank(Config c) const;
  /// rank() without validation; `c` must belong to the sector.
  [[nodiscard]] StateIndex rank_unchecked(Config c) const noexcept {
    const auto lo = c & 0xFFFFu;
    auto r = lo_table_[lo];
    if (const auto hi = c >> 16; hi != 0) r += hi_table_[hi * 17u + std::popcount(lo)];
    return r;
  }

  [[nodiscard]] bool contains(Config c) const noexcept;

 private:
  int L_;
  int N_;
  std::vector<Config> states_;
  std::vector<std::uint32_t> lo_table_;
  std::vector<std::uint32_t> hi_table_;
};

}  // namespace zigzag
