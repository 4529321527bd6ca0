// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#include "zigzag/sparse_operator.hpp"

#include "zigzag/parallel.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>
#include <string>

namespace zigzag {

SparseOperator::Builder::Builder(std::size_t dim) : op_(std::make_unique<SparseOperator>()) {
  op_->diag_.reserve(dim);
  op_->row_ptr_.reserve(dim + 1);
  rows_expected_ = dim;
}

void SparseOperator::Builder::store(cplx v) {
  auto& op = *op_;
  if (op.use_palette_) {
    const std::pair key{std::bit_cast<std::uint64_t>(v.real()), std::bit_cast<std::uint64_t>(v.imag())};
    if (auto it = lookup_.find(key); it != lookup_.end()) {
      op.code_.push_back(it->second);
      return;
    }
    if (op.palette_.size() < std::numeric_limits<std::uint16_t>::max()) {
      const auto code = static_cast<std::uint16_t>(op.palette_.size());
      op.palette_.push_back(v);
      lookup_.emplace(key, code);
      op.code_.push_back(code);
      return;
    }
    // too many distinct amplitudes: switch to plain storage
    op.values_.reserve(op.code_.size() + 1);
    for (auto c : op.code_) op.values_.push_back(op.palette_[c]);
    op.code_ = {};
    op.palette_ = {};
    lookup_ = {};
    op.use_palette_ = false;
  }
  op.values_.push_back(v);
}

void SparseOperator::Builder::push_row(double diagonal, std::vector<Entry>& offdiag) {
  auto& op = *op_;
  const auto row = op.diag_.size();
  if (row >= rows_expected_) throw std::logic_error("SparseOperator::Builder: too many rows");
  std::sort(offdiag.begin(), offdiag.end(), [](const Entry& a, const Entry& b) { return a.col < b.col; });
  for (std::size_t i = 0; i < offdiag.size();) {
    const auto col = offdiag[i].col;
    if (col == row || col >= rows_expected_)
      throw std::logic_error("SparseOperator::Builder: bad off-diagonal column " + std::to_string(col));
    cplx v = offdiag[i].value;
    std::size_t k = i + 1;
    for (; k < offdiag.size() && offdiag[k].col == col; ++k) v += offdiag[k].value;
    if (v != cplx{}) {
      op.col_.push_back(col);
      store(v);
    }
    i = k;
  }
  op.diag_.push_back(diagonal);
  op.row_ptr_.push_back(op.col_.size());
}

SparseOperator SparseOperator::Builder::finish() {
  if (op_->diag_.size() != rows_expected_)
    throw std::logic_error("SparseOperator::Builder: " + std::to_string(op_->diag_.size()) + " rows pushed, expected " +
                           std::to_string(rows_expected_));
  lookup_ = {};
  op_->col_.shrink_to_fit();
  op_->code_.shrink_to_fit();
  op_->values_.shrink_to_fit();
  return std::move(*op_);
}

std::size_t SparseOperator::memory_bytes() const noexcept {
  return diag_.size() * sizeof(double) + row_ptr_.size() * sizeof(std::uint64_t) + col_.size() * sizeof(StateIndex) +
         code_.size() * sizeof(std::uint16_t) + (palette_.size() + values_.size()) * sizeof(cplx);
}

void SparseOperator::apply(std::span<const cplx> x, std::span<cplx> y, int threads) const {
  const std::size_t n = dim();
  if (x.size() != n || y.size() != n)
    throw std::invalid_argument("SparseOperator::apply: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                                std::to_string(n) + ")");
  auto rows = [&](std::size_t begin, std::size_t end) {
    if (use_palette_) {
      for (std::size_t r = begin; r < end; ++r) {
        cplx acc = diag_[r] * x[r];
        for (std::uint64_t e = row_ptr_[r]; e < row_ptr_[r + 1]; ++e) acc += palette_[code_[e]] * x[col_[e]];
        y[r] = acc;
      }
    } else {
      for (std::size_t r = begin; r < end; ++r) {
        cplx acc = diag_[r] * x[r];
        for (std::uint64_t e = row_ptr_[r]; e < row_ptr_[r + 1]; ++e) acc += values_[e] * x[col_[e]];
        y[r] = acc;
      }
    }
  };
  parallel_for(n, threads, rows);
}

CVector SparseOperator::apply(std::span<const cplx> x, int threads) const {
  CVector y(dim());
  apply(x, y, threads);
  return y;
}

double SparseOperator::hermiticity_residual() const {
  double worst = 0.0;
  for_each_offdiag([&](StateIndex r, StateIndex c, cplx h) { worst = std::max(worst, std::abs(h - std::conj(element(c, r)))); });
  return worst;
}

double SparseOperator::expectation(std::span<const cplx> x) const {
  if (x.size() != dim()) throw std::invalid_argument("SparseOperator::expectation: dimension mismatch");
  double e = 0.0;
  for (std::size_t r = 0; r < dim(); ++r) e += diag_[r] * std::norm(x[r]);
  double off = 0.0;
  for_each_offdiag([&](StateIndex r, StateIndex c, cplx h) { off += (std::conj(x[r]) * h * x[c]).real(); });
  return e + off;
}

cplx SparseOperator::element(StateIndex r, StateIndex c) const {
  if (r >= dim() || c >= dim()) throw std::out_of_range("SparseOperator::element: index out of range");
  if (r == c) return diag_[r];
  const auto first = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
  const auto last = col_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
  const auto it = std::lower_bound(first, last, c);
  if (it == last || *it != c) return 0.0;
  return value(static_cast<std::uint64_t>(it - col_.begin()));
}

Eigen::MatrixXcd SparseOperator::to_dense() const {
  const auto n = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) m(r, r) = diag_[static_cast<std::size_t>(r)];
  for_each_offdiag([&](StateIndex r, StateIndex c, cplx h) { m(r, c) += h; });
  return m;
}

SparseOperator SparseOperator::from_raw(std::vector<double> diag, std::vector<std::uint64_t> row_ptr,
                                        std::vector<StateIndex> col, std::vector<cplx> values) {
  const auto n = diag.size();
  if (row_ptr.size() != n + 1 || row_ptr.front() != 0 || row_ptr.back() != col.size() || col.size() != values.size())
    throw std::invalid_argument("SparseOperator::from_raw: inconsistent arrays");
  Builder b(n);
  std::vector<Entry> row;
  for (std::size_t r = 0; r < n; ++r) {
    row.clear();
    for (auto e = row_ptr[r]; e < row_ptr[r + 1]; ++e) row.push_back({col[e], values[e]});
    b.push_row(diag[r], row);
  }
  return b.finish();
}

}  // namespace zigzag
