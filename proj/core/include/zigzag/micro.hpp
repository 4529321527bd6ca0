// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

namespace zigzag::micro {

using Rational = boost::multiprecision::cpp_rational;
using cplx = std::complex<double>;

/// sign * sqrt(square), kept exact.
struct SignedSqrt {
  int sign = 0;
  Rational square = 0;

  [[nodiscard]] double value() const;
  friend SignedSqrt operator*(const SignedSqrt& a, const SignedSqrt& b);
  friend bool operator==(const SignedSqrt& a, const SignedSqrt& b) = default;
};

/// Angular momenta are passed doubled (two_j = 2j) so half-integers stay integral.
[[nodiscard]] SignedSqrt wigner3j_exact(int two_j1, int two_j2, int two_j3, int two_m1, int two_m2, int two_m3);
[[nodiscard]] SignedSqrt wigner6j_exact(int two_j1, int two_j2, int two_j3, int two_j4, int two_j5, int two_j6);

/// Same, taking ordinary (half-)integer values; throws std::invalid_argument otherwise.
[[nodiscard]] double wigner3j(double j1, double j2, double j3, double m1, double m2, double m3);
[[nodiscard]] double wigner6j(double j1, double j2, double j3, double j4, double j5, double j6);

/// |S L J M> with every quantum number doubled.
struct AngularState {
  int two_S = 1;
  int two_L = 0;
  int two_J = 1;
  int two_M = 1;

  [[nodiscard]] bool valid() const noexcept;
};

/// <a| C_{k,p} |b> by the reduced-element formula.
[[nodiscard]] SignedSqrt spherical_element(const AngularState& a, const AngularState& b, int k, int p);

/// <a| d^{+-} |b> in units of e * xi, with the electron charge -e.
[[nodiscard]] SignedSqrt dipole_element(const AngularState& a, const AngularState& b, int component);

/// Levels of one atom, indexed 0 -> |0>, 1 -> |1>, 2 -> |+>.
struct LevelScheme {
  std::array<AngularState, 3> level{
      AngularState{1, 0, 1, 1},   // 60S_1/2, M = +1/2
      AngularState{1, 2, 3, -1},  // 60P_3/2, M = -1/2
      AngularState{1, 2, 3, 3},   // 60P_3/2, M = +3/2
  };
};

/// The four transition elements <0|d-|+>, <1|d-|0>, <0|d+|1>, <+|d+|0>.
[[nodiscard]] std::array<SignedSqrt, 4> transition_elements(const LevelScheme& s);

/// Every assignment of S_1/2 and P_1/2, P_3/2 sublevels that reproduces `target`.
[[nodiscard]] std::vector<LevelScheme> matching_schemes(const std::array<SignedSqrt, 4>& target);

/// Dipole operator component (+1, 0, -1) as a 3x3 matrix on the level scheme.
[[nodiscard]] Eigen::Matrix3cd dipole_matrix(const LevelScheme& s, int component);

/**
 * Three atoms on a triangle with common distance. Bond angles are
 * phi_12 = alpha, phi_23 = -alpha, phi_13 = 0, which at alpha = pi/3 is the
 * equilateral triangle with its 1-3 side horizontal.
 */
struct TriangleSetup {
  double coupling = 1.0;  // 1 / (4 pi eps0 R^3) in units where e = xi = 1
  double alpha = 1.0471975511965976;
  double delta = 100.0;
  double omega = 0.0;
  LevelScheme levels{};

  [[nodiscard]] double angle(int i, int j) const;
  /// -<0,1,0|V_12|1,0,0>
  [[nodiscard]] double J() const;
  /// 27 J / (2 Delta)
  [[nodiscard]] double g() const;
};

/// 9x9 interaction of atoms i and j, basis index 3 * level_i + level_j.
[[nodiscard]] Eigen::MatrixXcd pair_interaction(const TriangleSetup& s, int i, int j);

/// Full 27-level Hamiltonian, basis index 9 * l1 + 3 * l2 + l3.
[[nodiscard]] Eigen::MatrixXcd three_atom_hamiltonian(const TriangleSetup& s);

/// h_{i->j->k}: from |1> on i via |+> on j to |1> on k (sites 0-based).
[[nodiscard]] cplx indirect_amplitude(const TriangleSetup& s, int i, int j, int k);

/// Single-excitation effective model H_PP - H_PQ H_QP / Delta over |100>, |010>, |001>.
[[nodiscard]] Eigen::Matrix3cd adiabatic_eliminate(const TriangleSetup& s);

/// Lowest three levels of the exact single-excitation block (|1> or |+> on one atom), measured from omega.
[[nodiscard]] std::array<double, 3> exact_single_excitation(const TriangleSetup& s);

/**
 * Three-site hard-core boson model with density-dependent hops; basis is the
 * occupation bit pattern (bit i = site i). Every directed hop appears once.
 */
[[nodiscard]] Eigen::MatrixXcd triangle_model(double J, double g, double alpha);

struct EliminationPoint {
  double delta = 0.0;
  double error = 0.0;  // max eigenvalue deviation, units of J
};
[[nodiscard]] std::vector<EliminationPoint> elimination_scan(TriangleSetup s, const std::vector<double>& deltas);
/// Least-squares slope of log(error) against log(delta).
[[nodiscard]] double loglog_slope(const std::vector<EliminationPoint>& pts);

}  // namespace zigzag::micro
