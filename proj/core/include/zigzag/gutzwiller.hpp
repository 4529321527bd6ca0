// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "zigzag/model_params.hpp"
#include "zigzag/term_table.hpp"

namespace zigzag::gutzwiller {

/**
 * Which weights the fourth site of the cell carries. Symmetric uses
 * (1-eps)|0> + (1+eps)|1>, mirroring the first site, so the densities repeat
 * the 1001 ordered pattern and average to 1/2. Literal keeps the
 * printed (1-eps)|0> + (1-eps)|1>.
 */
enum class Variant { Symmetric, Literal };

[[nodiscard]] std::string_view to_string(Variant v) noexcept;
[[nodiscard]] Variant parse_variant(std::string_view s);

struct Config {
  double epsilon = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  int L = 16;
  Variant variant = Variant::Symmetric;
};

/// Normalized single-site state empty|0> + full|1>.
struct SiteState {
  cplx empty{1.0};
  cplx full{0.0};
};

/// Per-site states for the four-site cell tiled over L sites.
[[nodiscard]] std::vector<SiteState> build_state(const Config& c);

/// <psi|H|psi> for a product state; every term factorizes into on-site averages.
[[nodiscard]] double energy(const std::vector<SiteState>& sites, const TermTable& terms);
/// Same, building the periodic term table from `p` (p.L must equal c.L).
[[nodiscard]] double energy(const Config& c, const ModelParams& p);

[[nodiscard]] std::vector<double> densities(const std::vector<SiteState>& sites);
/// Flux order parameter of the product state (fluxes are linear in the densities).
[[nodiscard]] double chi(const std::vector<SiteState>& sites, bool periodic);

struct Minimum {
  Config config;
  double energy = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct OptimizeOptions {
  int restarts = 32;
  std::uint64_t seed = 2024;
  int threads = 1;
  double epsilon_bound = 0.9;
  double size_tol = 1e-7;  // simplex size; the energy is then settled far below 1e-10
  int max_iter = 20000;
};

struct OptimizeResult {
  Minimum best;
  std::vector<Minimum> restarts;  // in restart order
  std::vector<Minimum> distinct;  // unique converged minima, lowest first
};

/// Multi-start simplex minimization over (eps, theta, phi). Requires PBC.
[[nodiscard]] OptimizeResult optimize(const ModelParams& p, Variant v, const OptimizeOptions& opt = {});

/// Minimum over (theta, phi) with epsilon held fixed.
[[nodiscard]] Minimum optimize_phases(const ModelParams& p, Variant v, double epsilon, const OptimizeOptions& opt = {});

/// d^2 E / d eps^2 at eps = 0 with the phases re-optimized at every eps (central difference).
[[nodiscard]] double curvature_at_zero(const ModelParams& p, Variant v, double h = 1e-3,
                                       const OptimizeOptions& opt = {});

struct ScanPoint {
  double g = 0.0;
  Minimum best;
  double chi = 0.0;
};
[[nodiscard]] std::vector<ScanPoint> epsilon_scan(ModelParams p, Variant v, const std::vector<double>& gs,
                                                  const OptimizeOptions& opt = {});

}  // namespace zigzag::gutzwiller
