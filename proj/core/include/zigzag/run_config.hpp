// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "zigzag/model_params.hpp"
#include "zigzag/observables.hpp"
#include "zigzag/table.hpp"

namespace zigzag::run {

enum class Axis { G, Eta };
[[nodiscard]] std::string_view to_string(Axis a) noexcept;
[[nodiscard]] Axis parse_axis(std::string_view s);

/// Inclusive arithmetic grid; the last point is kept if it lands within step/1000 of `stop`.
[[nodiscard]] std::vector<double> arange(double start, double stop, double step);

struct ObservableSelection {
  bool density = true;
  bool g2 = true;
  bool currents = true;
  bool flux = true;
  bool correlators = true;  // Re<b^dag_{j+1} b_j>, Im<b^dag_{j+2} b_j> at j = 0
  bool continuity = true;   // max_j |<i[H, n_j]>|
};

/**
 * Everything a run needs. Loaded from a YAML file (JSON is accepted too),
 * then overridden by command-line flags.
 *
 *   model: {L: 20, N: 10, g: 0.4, eta: 1, J: 1, boundary: periodic}
 *   grid:  {g: {start: 0.2, stop: 0.8, step: 0.005}, eta: [1], axis: g}
 *   sizes: [12, 16, 20]
 *   observables: {g2: false}
 *   solver: {tol: 1e-10, max_iter: 2000}
 *   output: {dir: out, format: csv, tag: cut, dump_operator: false, operator_cache: false}
 *   seed: 12345
 *   threads: 1
 */
struct RunConfig {
  ModelParams model = ModelParams::half_filled(12, 0.0, 1.0, Boundary::Periodic);
  bool n_explicit = false;  // N given; otherwise half filling follows L
  std::vector<double> g_grid{0.0};
  std::vector<double> eta_grid{1.0};
  Axis axis = Axis::G;
  std::vector<int> sizes{12, 16, 20, 24};
  int peaks = 2;            // peaks tracked by the finite-size scan
  double prominence = 0.05;
  ObservableSelection observables;
  CurrentConvention convention = CurrentConvention::Formula;
  double tol = 1e-10;
  int max_iter = 2000;
  std::filesystem::path out_dir = ".";
  std::string tag;
  io::Format format = io::Format::Csv;
  bool dump_operator = false;
  bool operator_cache = false;  // reuse dumps found in out_dir
  std::uint64_t seed = 12345;
  int threads = 1;

  /// Grids nonempty, model valid for every L and grid point, output dir writable.
  void validate() const;
  /// Model for one grid point at size L (N follows L unless given).
  [[nodiscard]] ModelParams point(double g, double eta, int L) const;
  [[nodiscard]] ModelParams point(double g, double eta) const { return point(g, eta, model.L); }
  /// Compact JSON of every field, used as the file header.
  [[nodiscard]] std::string to_json() const;
};

/// Phase-diagram axes: g in [0, 3] step 0.025, eta in [0, 10] step 0.25.
[[nodiscard]] RunConfig default_config();

[[nodiscard]] RunConfig parse_config(std::string_view yaml_text);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

}  // namespace zigzag::run
