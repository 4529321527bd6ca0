// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "zigzag/basis.hpp"
#include "zigzag/model_params.hpp"
#include "zigzag/sparse_operator.hpp"
#include "zigzag/term_table.hpp"

namespace zigzag {

using State = std::span<const cplx>;

// ---- densities and correlations -------------------------------------------

[[nodiscard]] std::vector<double> density(const BasisSector& sector, State psi);
[[nodiscard]] double density_density(const BasisSector& sector, State psi, int i, int j);

/**
 * Connected density correlation versus distance, <n_i n_{i+d}> - <n_i><n_{i+d}>.
 * Periodic: reference site 0, d = 0..L-1. Open: averaged over all i with
 * i + d < L.
 */
[[nodiscard]] std::vector<double> g2(const BasisSector& sector, State psi, bool periodic);

/// g2 of the equal-weight mixture of the given (degenerate) states.
[[nodiscard]] std::vector<double> g2_mixture(const BasisSector& sector, const std::vector<CVector>& states,
                                             bool periodic);

/// <b^dag_k prod_{m in empty} (1 - n_m) b_l>; k == l gives the conditioned density.
[[nodiscard]] cplx corr1(const BasisSector& sector, State psi, int k, int l, Config empty = 0);
[[nodiscard]] Eigen::MatrixXcd corr1_matrix(const BasisSector& sector, State psi);

/// Spin-1/2 form of <b^dag_k b_l>: xx+yy is the real part, yx-xy the imaginary part.
struct SpinCorrelation {
  double xx_plus_yy = 0.0;
  double yx_minus_xy = 0.0;
};
[[nodiscard]] SpinCorrelation spin_correlation(const BasisSector& sector, State psi, int k, int l);

// ---- currents --------------------------------------------------------------

/**
 * Weight of the density-conditioned (order g) hops in bond currents.
 * Formula: the explicit bond formulas, whose g terms are half of what the
 * continuity equation gives. Continuity: -2 Im(t* <b^dag_j b_{j+d}>) summed
 * over every hop term of the bond, which is what i[H, n] produces.
 */
enum class CurrentConvention { Formula, Continuity };

/// Expectation of the current operator of bond src -> dst from all hop terms of that bond.
[[nodiscard]] double bond_current(const BasisSector& sector, State psi, const TermTable& terms, int src, int dst,
                                  CurrentConvention conv = CurrentConvention::Formula);

/// I_{j->j+2} (intra-chain). Throws std::out_of_range for an OBC bond off the edge.
[[nodiscard]] double current_nnn(const BasisSector& sector, State psi, const ModelParams& p, int j,
                                 CurrentConvention conv = CurrentConvention::Formula);
/// I_{j->j+1} (inter-chain).
[[nodiscard]] double current_nn(const BasisSector& sector, State psi, const ModelParams& p, int j,
                                CurrentConvention conv = CurrentConvention::Formula);

/// <i[H, n_j]> for every site, straight from the operator's matrix elements.
[[nodiscard]] std::vector<double> current_divergence(const SparseOperator& H, const BasisSector& sector, State psi);

/// Net inflow per site rebuilt from continuity bond currents of all hop ranges in `terms`.
[[nodiscard]] std::vector<double> divergence_from_bonds(const BasisSector& sector, State psi, const TermTable& terms);

// ---- plaquette fluxes ------------------------------------------------------

/// Sites j-1 .. j+4 must exist (OBC) for plaquette j.
[[nodiscard]] bool plaquette_valid(int L, bool periodic, int j) noexcept;

/// Density form (pi/3)(n_{j+1} + n_{j+2} - n_{j-1} - n_{j+4}) on a configuration.
[[nodiscard]] double flux_density_form(Config c, int L, int j);

/// Link phase arg U_{a,b} for the links of the rhombus (d = a - b in {1, 2}).
[[nodiscard]] double link_phase(Config c, int L, int b, int d);

/// Clockwise phase sum around plaquette j (the classical part is 2pi/3).
[[nodiscard]] double flux_phase_sum(Config c, int L, int j);

struct FluxMoments {
  double mean = 0.0;
  double variance = 0.0;
};
[[nodiscard]] FluxMoments plaquette_flux(const BasisSector& sector, State psi, bool periodic, int j);

/**
 * Staggered flux order parameter |(1/L) sum_{j even} (-1)^{j/2} (<Phi_j> + <Phi_{j+1}>)|.
 * OBC drops the first and last valid plaquette; PBC uses all of them.
 */
[[nodiscard]] double chi_from_fluxes(const std::vector<std::optional<double>>& flux_mean, int L, bool periodic);
[[nodiscard]] double chi_order(const BasisSector& sector, State psi, bool periodic);

// ---- fidelity --------------------------------------------------------------

/// (2/N) (1 - |<A|B>|) / dl^2
[[nodiscard]] double fidelity(State a, State b, double dl, int N);

/**
 * Subspace form for degenerate ground multiplets: |<A|B>| is replaced by the
 * geometric mean of the leading min(dA, dB) singular values of A^dag B,
 * which does not depend on the basis chosen inside each multiplet.
 */
[[nodiscard]] double fidelity(const std::vector<CVector>& a, const std::vector<CVector>& b, double dl, int N);
[[nodiscard]] double subspace_overlap(const std::vector<CVector>& a, const std::vector<CVector>& b);

}  // namespace zigzag
