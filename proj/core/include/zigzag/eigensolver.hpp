// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "zigzag/sparse_operator.hpp"

namespace zigzag {

struct SpectralResult {
  std::vector<double> energies;    // ascending
  std::vector<CVector> vectors;    // orthonormal, phase fixed
  std::vector<double> residuals;   // ||H v - E v||
  std::uint64_t seed = 0;
  double spectral_width = 0.0;     // estimate of E_max - E_min
  int ground_multiplet = 1;        // states within degeneracy_tol * width of E_0
  int matvecs = 0;
};

struct LanczosOptions {
  int k = 1;                        // eigenpairs wanted
  std::uint64_t seed = 12345;
  double tol = 1e-10;               // residual bound relative to the spectral width
  int max_iter = 2000;              // Lanczos steps per solve
  int basis_size = 0;               // Krylov basis before a restart; 0 picks a default
  bool detect_degeneracy = true;
  double degeneracy_tol = 1e-8;
  int max_multiplet = 16;
  int threads = 1;                  // workers for the matvec
};

/// Raised when the iteration limit is hit; carries the best residual seen.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  [[nodiscard]] double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

/**
 * Lowest eigenpairs by thick-restart Lanczos with full reorthogonalization.
 *
 * A single Krylov space only ever sees one direction of an exactly
 * degenerate eigenspace, so after the first solve the search is repeated
 * from random vectors deflated against everything found so far; states
 * within degeneracy_tol * width of E_0 are collected into the ground
 * multiplet (which may make the result longer than k).
 */
[[nodiscard]] SpectralResult lanczos_ground(const SparseOperator& op, const LanczosOptions& opt = {});

/// Full spectrum by dense diagonalization; for oracles on small sectors.
[[nodiscard]] SpectralResult dense_spectrum(const SparseOperator& op, std::size_t max_dim = 20000);

/// Multiply by a phase so the largest-magnitude entry (first on ties) is real positive.
void fix_phase(CVector& v);

[[nodiscard]] cplx dot(std::span<const cplx> a, std::span<const cplx> b) noexcept;  // <a|b>
[[nodiscard]] double norm(std::span<const cplx> a) noexcept;

}  // namespace zigzag
