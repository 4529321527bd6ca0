// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace zigzag {

enum class Boundary { Open, Periodic };

std::string_view to_string(Boundary b) noexcept;
Boundary parse_boundary(std::string_view s);

/// Raised for any inconsistent or out-of-range model/run configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * Parameters of the zig-zag ladder of hard-core bosons.
 *
 * Site j lives on the upper sub-chain (A) for even j and on the lower
 * sub-chain (B) for odd j. All energies are measured in units of `J`.
 */
struct ModelParams {
  int L = 8;
  int N = 4;
  double g = 0.0;    ///< second-order coupling, g = 27 J / (2 Delta)
  double eta = 1.0;  ///< scale of the nearest-neighbour density repulsion
  double J = 1.0;
  Boundary boundary = Boundary::Periodic;

  /// Geometric angle of the equilateral zig-zag; not configurable.
  static constexpr double alpha = std::numbers::pi / 3.0;
  static constexpr int max_sites = 32;

  /// Throws ConfigError when the parameters cannot describe a valid run.
  void validate() const;

  [[nodiscard]] bool periodic() const noexcept { return boundary == Boundary::Periodic; }

  /// Half filling for the given length.
  [[nodiscard]] static ModelParams half_filled(int L, double g, double eta, Boundary b);
};

}  // namespace zigzag
