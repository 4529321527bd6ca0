// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "zigzag/model_params.hpp"

namespace zigzag::meanfield {

/**
 * Quadratic model obtained by replacing every density in the fermionic
 * Hamiltonian by 1/2: inter-chain hop -J(1-g), intra-chain hop
 * -gJ e^{+-4 pi i/3} (upper sign on chain A), constant -2 eta g J per
 * particle. The 2x2 Bloch matrix is written in the basis (A_k, B_k) of the
 * two-site cell with site 2m on A and 2m+1 on B.
 */
struct BlochModel {
  double g = 0.0;
  double J = 1.0;
  double eta = 0.0;

  [[nodiscard]] Eigen::Matrix2cd matrix(double k) const;
  /// Energy shift per particle, kept out of the bands.
  [[nodiscard]] double offset() const noexcept { return -2.0 * eta * g * J; }
};

struct BandPair {
  double lower = 0.0;
  double upper = 0.0;
};

[[nodiscard]] BandPair bands(const BlochModel& m, double k);
[[nodiscard]] std::vector<BandPair> bands(const BlochModel& m, std::span<const double> ks);

/// n points uniformly covering [-pi, pi), the momenta of an n-cell ring.
[[nodiscard]] std::vector<double> k_grid(int n);

/// Energy splitting the lowest filling * 2nk band states from the rest.
[[nodiscard]] double fermi_level(const BlochModel& m, double filling = 0.5, int nk = 4096);

/// The four branches over the reduced zone [-pi/2, pi/2] of the four-site cell.
struct FoldedBands {
  std::vector<double> q;
  std::vector<double> lower, lower_shifted, upper, upper_shifted;  // E(q), E(q + pi)
};
[[nodiscard]] FoldedBands fold(const BlochModel& m, int nq);

/// Whether the two lower-band branches E_-(q) and E_-(q + pi) intersect inside the reduced zone.
[[nodiscard]] bool lower_branches_cross(const BlochModel& m, int nq = 4096);

/// Smallest g in [g_lo, g_hi] at which the lower folded branches cross; nullopt when they never do.
[[nodiscard]] std::optional<double> folded_crossing(double g_lo, double g_hi, double J = 1.0, int nq = 4096,
                                                    double tol = 1e-6);

/// Single-particle matrix h with H = sum_ab h_ab c^dag_a c_b, offset excluded.
[[nodiscard]] Eigen::MatrixXcd real_space_matrix(int L, double g, double J, Boundary b);

/// Site densities of the Slater determinant filling the N lowest orbitals of h.
[[nodiscard]] std::vector<double> slater_density(const Eigen::MatrixXcd& h, int N);

}  // namespace zigzag::meanfield
