// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "zigzag/basis.hpp"
#include "zigzag/model_params.hpp"
#include "zigzag/sparse_operator.hpp"
#include "zigzag/term_table.hpp"

namespace zigzag {

/// Raised when a build is requested for a boundary it cannot represent.
class UnsupportedBoundary : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Assemble the sparse matrix of an arbitrary term table on a sector.
[[nodiscard]] SparseOperator build_operator(const TermTable& terms, const BasisSector& sector);

/// Hard-core boson Hamiltonian. `max_range` < 4 truncates the longer hops.
[[nodiscard]] SparseOperator build_boson(const ModelParams& p, const BasisSector& sector, int max_range = 4);

/**
 * Jordan-Wigner fermion Hamiltonian (OBC only).
 *
 * Each bosonic hop src -> dst becomes c^dag_dst prod_l (1 - 2 n_l) c_src over
 * the sites l strictly between src and dst, and matrix elements are taken
 * with the fermionic ordering signs of the site-ordered Fock basis. With
 * `with_strings = false` the strings are left out, which breaks equivalence.
 */
[[nodiscard]] SparseOperator build_fermion_jw(const ModelParams& p, const BasisSector& sector,
                                              bool with_strings = true);

/// Sign of c^dag_dst [string] c_src acting on the site-ordered Fock state `c`.
[[nodiscard]] int fermion_hop_sign(Config c, int src, int dst, bool with_strings) noexcept;

}  // namespace zigzag
