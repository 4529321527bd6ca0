// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zigzag/eigensolver.hpp"
#include "zigzag/run_config.hpp"

namespace zigzag::run {

/**
 * Observables of one ground state. A degenerate ground multiplet is treated
 * as the equal-weight mixture of its states, so nothing here depends on the
 * basis the solver happened to return inside the multiplet.
 */
struct ObservableReport {
  ModelParams params;
  std::size_t dim = 0;
  double energy = 0.0;
  int multiplet = 1;
  double residual = 0.0;  // worst over the multiplet
  int matvecs = 0;
  std::uint64_t seed = 0;

  std::vector<double> density;
  std::vector<double> g2;
  std::vector<std::optional<double>> current_nnn;  // I_{j->j+2}
  std::vector<std::optional<double>> current_nn;   // I_{j->j+1}
  std::vector<std::optional<double>> flux;         // <Phi_j>
  std::optional<double> chi;
  std::optional<double> re_nn;   // Re<b^dag_{j0+1} b_j0>
  std::optional<double> im_nnn;  // Im<b^dag_{j0+2} b_j0>
  int corr_site = 0;
  std::optional<double> max_divergence;

  std::optional<double> fidelity;  // towards the next point along the scan axis
};

struct PointResult {
  ObservableReport report;
  std::vector<CVector> ground;  // empty unless asked for
};

/// Site used for the single-bond correlators: 0 with PBC, a bulk even site with OBC.
[[nodiscard]] int correlator_site(const ModelParams& p) noexcept;

/// Build, solve, measure. SolverFailure is rethrown with the parameters in the message.
[[nodiscard]] PointResult run_point(const RunConfig& cfg, const ModelParams& p, bool keep_vectors = false,
                                    int matvec_threads = 1);

/// Column names for reports at size L (and whether a fidelity column is present).
[[nodiscard]] std::vector<std::string> report_columns(int L, bool with_fidelity);
[[nodiscard]] io::Row report_row(const ObservableReport& r, bool with_fidelity);

struct Peak {
  double x = 0.0;
  double height = 0.0;
  double prominence = 0.0;
  std::size_t index = 0;
};

/// Strict local maxima whose topographic prominence is at least `min_prominence`, in x order.
[[nodiscard]] std::vector<Peak> find_peaks(const std::vector<double>& x, const std::vector<double>& y,
                                           double min_prominence);

struct SweepResult {
  std::vector<ObservableReport> points;  // grid order: scan axis fastest
  std::vector<double> fidelity_x;        // midpoints of adjacent pairs, per line concatenated
  std::vector<double> fidelity;
  std::vector<std::vector<Peak>> peaks;  // per scan line
  std::filesystem::path file;
};

using Progress = std::function<void(std::size_t done, std::size_t total)>;

/**
 * Cartesian (g, eta) grid at size L. Points run on a bounded worker pool;
 * the fidelity of each point is taken against the next point along
 * cfg.axis (dl = their spacing), and ground vectors are released as soon as
 * both neighbours have used them. Rows go to one writer in grid order.
 * With `write` false nothing is persisted.
 */
[[nodiscard]] SweepResult run_sweep(const RunConfig& cfg, int L, bool write = true, const Progress& progress = {});

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  std::optional<double> intercept_stderr;  // needs more than two points
  std::vector<double> residuals;
};

/// Least squares y = a + b x.
[[nodiscard]] LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct FssBranch {
  std::vector<int> sizes;
  std::vector<double> positions;
  LinearFit fit;        // position against 1/L
  bool monotone = false;
};

struct FssResult {
  std::vector<SweepResult> cuts;
  std::vector<FssBranch> branches;  // ordered by position
  std::filesystem::path file;
};

/**
 * Repeats the cut for every L in cfg.sizes, keeps the cfg.peaks most
 * prominent peaks per size, matches them by order along the axis and fits
 * each branch linearly in 1/L.
 */
[[nodiscard]] FssResult finite_size_scan(const RunConfig& cfg, bool write = true, const Progress& progress = {});
[[nodiscard]] FssResult fit_branches(std::vector<SweepResult> cuts, const std::vector<int>& sizes, int peaks);

}  // namespace zigzag::run
