// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <complex>
#include <vector>

#include "zigzag/basis.hpp"
#include "zigzag/model_params.hpp"

namespace zigzag {

using cplx = std::complex<double>;

/**
 * One directed, density-conditioned hop  amp * b^dag_dst b_src * prod_k (1 - n_k).
 *
 * The Hermitian partner (dst -> src, conjugated amplitude, same conditions)
 * is stored as its own entry.
 */
struct HopTerm {
  int src = 0;
  int dst = 0;
  int range = 0;           // |dst - src| measured along the ladder
  int n_empty = 0;         // number of used entries in `empty`
  std::array<int, 2> empty{-1, -1};
  cplx amp{};

  [[nodiscard]] Config need_mask() const noexcept { return Config{1} << src; }
  /// Sites that must be unoccupied: the target and all conditioning sites.
  [[nodiscard]] Config empty_mask() const noexcept {
    Config m = Config{1} << dst;
    for (int i = 0; i < n_empty; ++i) m |= Config{1} << empty[i];
    return m;
  }
  [[nodiscard]] bool acts_on(Config c) const noexcept {
    return (c & need_mask()) && !(c & empty_mask());
  }
};

/// amp * n_site * (1 - n_other)
struct DiagTerm {
  int site = 0;
  int other = 0;
  double amp = 0.0;
};

struct TermTable {
  int L = 0;
  std::vector<HopTerm> hops;
  std::vector<DiagTerm> diag;

  [[nodiscard]] double diagonal(Config c) const noexcept;
};

/**
 * Term list of the zig-zag Hamiltonian. Hops longer than `max_range` are
 * left out (max_range = 2 gives the nearest/next-nearest truncation).
 * Under OBC any term that references a site outside [0, L) is dropped.
 */
[[nodiscard]] TermTable build_terms(const ModelParams& p, int max_range = 4);

/// Complex Peierls factor e^{i s x} with s = +1 on even and -1 on odd sites.
[[nodiscard]] cplx parity_phase(int j, double x) noexcept;

}  // namespace zigzag
