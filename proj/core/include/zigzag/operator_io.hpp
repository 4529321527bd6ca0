// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "zigzag/model_params.hpp"
#include "zigzag/sparse_operator.hpp"

namespace zigzag::io {

inline constexpr std::uint32_t operator_dump_version = 1;

/**
 * Little-endian binary dump:
 *   "ZZOPDUMP" | u32 version | i32 L, N, boundary | f64 g, eta, J |
 *   u64 dim, nnz | f64 diag[dim] | u64 row_ptr[dim+1] | u32 col[nnz] |
 *   f64 (re, im)[nnz] | u64 FNV-1a of everything before it
 */
void write_operator(const std::filesystem::path& path, const SparseOperator& op, const ModelParams& p);

struct LoadedOperator {
  ModelParams params;
  SparseOperator op;
};
/// Throws std::runtime_error on a bad magic, version, size or checksum.
[[nodiscard]] LoadedOperator read_operator(const std::filesystem::path& path);

/// Canonical dump file name for a parameter point.
[[nodiscard]] std::string operator_file_name(const ModelParams& p);

}  // namespace zigzag::io
