// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#include "zigzag/model_params.hpp"

#include <cmath>

namespace zigzag {

std::string_view to_string(Boundary b) noexcept {
  return b == Boundary::Periodic ? "pbc" : "obc";
}

Boundary parse_boundary(std::string_view s) {
  if (s == "pbc" || s == "PBC" || s == "periodic") return Boundary::Periodic;
  if (s == "obc" || s == "OBC" || s == "open") return Boundary::Open;
  throw ConfigError("unknown boundary '" + std::string(s) + "' (expected pbc|obc)");
}

void ModelParams::validate() const {
  if (L <= 0 || L > max_sites)
    throw ConfigError("L must lie in [1, " + std::to_string(max_sites) + "], got " + std::to_string(L));
  if (N < 0 || N > L) throw ConfigError("N must lie in [0, L]");
  if (!std::isfinite(g) || g < 0.0) throw ConfigError("g must be finite and >= 0");
  if (!std::isfinite(eta) || eta < 0.0) throw ConfigError("eta must be finite and >= 0");
  if (!std::isfinite(J) || J <= 0.0) throw ConfigError("J must be finite and > 0");
  if (periodic()) {
    // range-4 hops and the 4-site ordered cell need at least two cells
    if (L % 4 != 0 || L < 8)
      throw ConfigError("periodic boundary requires L to be a multiple of 4 and >= 8, got " +
                        std::to_string(L));
  }
}

ModelParams ModelParams::half_filled(int L, double g, double eta, Boundary b) {
  ModelParams p;
  p.L = L;
  p.N = L / 2;
  p.g = g;
  p.eta = eta;
  p.boundary = b;
  return p;
}

}  // namespace zigzag
