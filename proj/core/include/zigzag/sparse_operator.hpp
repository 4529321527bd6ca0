// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <unordered_map>
#include <utility>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "zigzag/basis.hpp"

namespace zigzag {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

/**
 * Hermitian sparse matrix: real diagonal plus row-compressed off-diagonal part.
 *
 * Both triangles are stored so that apply() is a pure gather, which is
 * faster than a symmetric scatter and lets rows run in parallel with a fixed
 * summation order. Hamiltonians only ever produce a few dozen distinct
 * amplitudes, so values are 16-bit indices into a palette; past 65535
 * distinct values the builder falls back to storing them directly.
 */
class SparseOperator {
 public:
  struct Entry {
    StateIndex col;
    cplx value;
  };

  class Builder {
   public:
    explicit Builder(std::size_t dim);
    /// Rows must be pushed in order. Off-diagonal entries only; duplicate
    /// columns are summed, exact zeros discarded.
    void push_row(double diagonal, std::vector<Entry>& offdiag);
    [[nodiscard]] SparseOperator finish();

   private:
    struct KeyHash {
      std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const noexcept {
        return std::hash<std::uint64_t>{}(k.first * 0x9E3779B97F4A7C15ull ^ k.second);
      }
    };
    std::unique_ptr<SparseOperator> op_;
    std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, std::uint16_t, KeyHash> lookup_;
    std::size_t rows_expected_ = 0;
    void store(cplx v);
  };

  SparseOperator() = default;

  [[nodiscard]] std::size_t dim() const noexcept { return diag_.size(); }
  /// Stored off-diagonal entries.
  [[nodiscard]] std::size_t nnz_offdiag() const noexcept { return col_.size(); }
  /// Checks H(r,c) == conj(H(c,r)) for every stored entry to within `tol`.
  [[nodiscard]] double hermiticity_residual() const;
  [[nodiscard]] bool hermitian(double tol = 1e-12) const { return hermiticity_residual() <= tol; }
  [[nodiscard]] std::size_t palette_size() const noexcept { return palette_.size(); }
  [[nodiscard]] std::size_t memory_bytes() const noexcept;

  [[nodiscard]] double diagonal(StateIndex r) const noexcept { return diag_[r]; }
  [[nodiscard]] std::span<const double> diagonal() const noexcept { return diag_; }

  /// y = H x, rows split over `threads` workers. Throws on size mismatch.
  void apply(std::span<const cplx> x, std::span<cplx> y, int threads = 1) const;
  [[nodiscard]] CVector apply(std::span<const cplx> x, int threads = 1) const;

  /// <x|H|x> (real part of a Hermitian form, imaginary part is rounding).
  [[nodiscard]] double expectation(std::span<const cplx> x) const;

  /// Calls f(row, col, value) for every stored off-diagonal entry, row-major.
  template <class F>
  void for_each_offdiag(F&& f) const {
    const std::size_t n = dim();
    for (std::size_t r = 0; r < n; ++r)
      for (std::uint64_t e = row_ptr_[r]; e < row_ptr_[r + 1]; ++e)
        f(static_cast<StateIndex>(r), col_[e], value(e));
  }
  /// Same, restricted to col > row.
  template <class F>
  void for_each_upper(F&& f) const {
    for_each_offdiag([&f](StateIndex r, StateIndex c, cplx h) {
      if (c > r) f(r, c, h);
    });
  }

  /// Full matrix element H(r, c).
  [[nodiscard]] cplx element(StateIndex r, StateIndex c) const;

  [[nodiscard]] Eigen::MatrixXcd to_dense() const;

  // raw access, used by the binary dump
  [[nodiscard]] std::span<const std::uint64_t> row_ptr() const noexcept { return row_ptr_; }
  [[nodiscard]] std::span<const StateIndex> columns() const noexcept { return col_; }
  [[nodiscard]] cplx value(std::uint64_t e) const noexcept {
    return use_palette_ ? palette_[code_[e]] : values_[e];
  }
  [[nodiscard]] static SparseOperator from_raw(std::vector<double> diag, std::vector<std::uint64_t> row_ptr,
                                               std::vector<StateIndex> col, std::vector<cplx> values);

 private:
  std::vector<double> diag_;
  std::vector<std::uint64_t> row_ptr_{0};
  std::vector<StateIndex> col_;
  std::vector<std::uint16_t> code_;
  std::vector<cplx> palette_;
  std::vector<cplx> values_;
  bool use_palette_ = true;
};

}  // namespace zigzag
