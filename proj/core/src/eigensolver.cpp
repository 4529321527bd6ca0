// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#include "zigzag/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

namespace zigzag {

cplx dot(std::span<const cplx> a, std::span<const cplx> b) noexcept {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm(std::span<const cplx> a) noexcept {
  double s = 0.0;
  for (auto x : a) s += std::norm(x);
  return std::sqrt(s);
}

void fix_phase(CVector& v) {
  if (v.empty()) return;
  std::size_t best = 0;
  double m = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = std::norm(v[i]);
    // small slack so that near-ties resolve to the first index reproducibly
    if (a > m * (1.0 + 1e-12)) {
      m = a;
      best = i;
    }
  }
  if (m <= 0.0) return;
  const cplx ph = std::conj(v[best]) / std::abs(v[best]);
  for (auto& x : v) x *= ph;
  v[best] = std::abs(v[best]);
}

namespace {

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) noexcept {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

using Basis = Eigen::MatrixXcd;  // one column per vector

// Project w out of the first `count` columns of B. One classical
// Gram-Schmidt pass, repeated when it removed most of the norm (DGKS).
Eigen::VectorXcd project_out(Eigen::Ref<Eigen::VectorXcd> w, const Basis& B, Eigen::Index count) {
  Eigen::VectorXcd h = Eigen::VectorXcd::Zero(count);
  if (count == 0) return h;
  const auto Q = B.leftCols(count);
  for (int pass = 0; pass < 3; ++pass) {
    const double before = w.norm();
    const Eigen::VectorXcd c = Q.adjoint() * w;
    w.noalias() -= Q * c;
    h += c;
    if (w.norm() > 0.7071 * before) break;
  }
  return h;
}

class Lanczos {
 public:
  Lanczos(const SparseOperator& op, const LanczosOptions& opt, std::mt19937_64& rng)
      : op_(op), opt_(opt), rng_(rng), n_(static_cast<Eigen::Index>(op.dim())) {}

  struct Pairs {
    std::vector<double> energies;
    std::vector<CVector> vectors;
    double width = 0.0;
  };

  int matvecs = 0;

  // k lowest eigenpairs in the orthogonal complement of the columns of `locked`
  Pairs solve(int k, const Basis& locked, double tol, const CVector* start = nullptr) {
    const Eigen::Index room = n_ - locked.cols();
    const int ncv_default = std::max(2 * k + 16, 24);
    const int ncv = static_cast<int>(std::min<Eigen::Index>(opt_.basis_size > 0 ? opt_.basis_size : ncv_default, room));
    if (ncv <= 0) return {};
    k = std::min(k, ncv);

    Basis V(n_, ncv);
    Eigen::VectorXcd w(n_);
    Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(ncv, ncv);
    if (start != nullptr) {
      Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(start->data(), n_);
      project_out(v, locked, locked.cols());
      V.col(0) = v / v.norm();
    } else {
      random_start(V, 0, locked);
    }

    double width = 0.0;
    double best = std::numeric_limits<double>::infinity();
    int kept = 0;
    int steps = 0;
    for (;;) {
      double beta = 0.0;
      for (int j = kept; j < ncv; ++j) {
        op_.apply(std::span<const cplx>(V.col(j).data(), static_cast<std::size_t>(n_)),
                  std::span<cplx>(w.data(), static_cast<std::size_t>(n_)), opt_.threads);
        ++matvecs;
        ++steps;
        project_out(w, locked, locked.cols());
        // local three-term part first, then the full pass mops up rounding
        Eigen::VectorXcd h = Eigen::VectorXcd::Zero(j + 1);
        h(j) = V.col(j).dot(w);
        w -= h(j) * V.col(j);
        if (j > 0) {
          h(j - 1) = V.col(j - 1).dot(w);
          w -= h(j - 1) * V.col(j - 1);
        }
        h += project_out(w, V, j + 1);
        for (int i = 0; i < j; ++i) {
          T(i, j) = h(i);
          T(j, i) = std::conj(h(i));
        }
        T(j, j) = h(j).real();
        beta = w.norm();
        if (j + 1 < ncv) {
          const double scale_ref = std::max(1.0, std::abs(h(j)));
          if (beta > 1e-12 * scale_ref) {
            V.col(j + 1) = w / beta;
          } else {
            // invariant subspace: continue from a fresh orthogonal direction
            random_start(V, j + 1, locked);
          }
        }
      }

      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(T);
      const auto& theta = es.eigenvalues();
      const auto& Y = es.eigenvectors();
      width = std::max(width, theta(ncv - 1) - theta(0));
      const double thr = tol * std::max(width, std::numeric_limits<double>::min());
      const bool exhausted = ncv == room;
      int nconv = 0;
      for (int i = 0; i < k; ++i)
        if (exhausted || beta * std::abs(Y(ncv - 1, i)) <= thr) ++nconv;
        else break;
      best = std::min(best, beta * std::abs(Y(ncv - 1, 0)));

      if (nconv >= k) {
        rotate(V, Y, ncv, k);
        Pairs out;
        out.width = width;
        for (int i = 0; i < k; ++i) {
          out.energies.push_back(theta(i));
          out.vectors.emplace_back(V.col(i).data(), V.col(i).data() + n_);
        }
        return out;
      }
      if (steps >= opt_.max_iter)
        throw SolverFailure("Lanczos did not converge in " + std::to_string(steps) +
                                " steps (best residual " + std::to_string(best) + ")",
                            best);

      // thick restart: keep the lowest Ritz vectors, continue from the residual
      const int p = std::clamp(k + (ncv - k) / 2, k, ncv - 1);
      rotate(V, Y, ncv, p);
      T.setZero();
      for (int i = 0; i < p; ++i) T(i, i) = theta(i);
      if (beta > 0.0) {
        V.col(p) = w / beta;
      } else {
        random_start(V, p, locked);
      }
      kept = p;
    }
  }

 private:
  const SparseOperator& op_;
  const LanczosOptions& opt_;
  std::mt19937_64& rng_;
  Eigen::Index n_;

  void random_start(Basis& V, Eigen::Index col, const Basis& locked) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::VectorXcd v(n_);
    for (int attempt = 0; attempt < 8; ++attempt) {
      for (Eigen::Index i = 0; i < n_; ++i) v(i) = cplx(nd(rng_), nd(rng_));
      v.normalize();
      project_out(v, locked, locked.cols());
      project_out(v, V, col);
      const double nv = v.norm();
      if (nv > 1e-8) {
        V.col(col) = v / nv;
        return;
      }
    }
    throw SolverFailure("could not draw a start vector outside the current subspace", 0.0);
  }

  // V[:, 0..p) <- V[:, 0..m) * Y[:, 0..p), in row blocks to bound the scratch
  void rotate(Basis& V, const Eigen::MatrixXcd& Y, int m, int p) const {
    constexpr Eigen::Index block = 4096;
    const Eigen::MatrixXcd Yp = Y.leftCols(p);
    for (Eigen::Index r = 0; r < n_; r += block) {
      const Eigen::Index rows = std::min(block, n_ - r);
      const Eigen::MatrixXcd tmp = V.block(r, 0, rows, m) * Yp;
      V.block(r, 0, rows, p) = tmp;
    }
  }
};

Basis to_basis(const std::vector<CVector>& vs, std::size_t n) {
  Basis B(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i)
    B.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::VectorXcd>(vs[i].data(), static_cast<Eigen::Index>(n));
  return B;
}

void finalize(const SparseOperator& op, SpectralResult& res, double degeneracy_tol) {
  std::vector<std::size_t> order(res.energies.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return res.energies[a] < res.energies[b]; });
  SpectralResult sorted = res;
  sorted.energies.clear();
  sorted.vectors.clear();
  sorted.residuals.clear();
  for (auto i : order) {
    sorted.energies.push_back(res.energies[i]);
    sorted.vectors.push_back(std::move(res.vectors[i]));
  }
  res = std::move(sorted);
  CVector hv(op.dim());
  for (std::size_t i = 0; i < res.vectors.size(); ++i) {
    fix_phase(res.vectors[i]);
    op.apply(res.vectors[i], hv);
    axpy(-res.energies[i], res.vectors[i], hv);
    res.residuals.push_back(norm(hv));
  }
  const double thr = degeneracy_tol * res.spectral_width;
  res.ground_multiplet = 0;
  for (double e : res.energies)
    if (e - res.energies.front() <= thr) ++res.ground_multiplet;
}

}  // namespace

SpectralResult lanczos_ground(const SparseOperator& op, const LanczosOptions& opt) {
  if (opt.k < 1) throw std::invalid_argument("lanczos_ground: k must be >= 1");
  if (op.dim() == 0) throw std::invalid_argument("lanczos_ground: empty operator");
  std::mt19937_64 rng(opt.seed);
  Lanczos lz(op, opt, rng);

  auto first = lz.solve(opt.k, Basis(static_cast<Eigen::Index>(op.dim()), 0), opt.tol);
  SpectralResult res;
  res.seed = opt.seed;
  res.spectral_width = first.width;
  res.energies = std::move(first.energies);
  res.vectors = std::move(first.vectors);

  if (opt.detect_degeneracy) {
    const double thr = opt.degeneracy_tol * res.spectral_width;
    for (int extra = 0; extra < opt.max_multiplet && res.vectors.size() < op.dim(); ++extra) {
      // a loose probe first: Ritz values converge quadratically, so its energy
      // is accurate far below the residual tolerance
      const Basis locked = to_basis(res.vectors, op.dim());
      auto more = lz.solve(1, locked, std::max(opt.tol, 1e-6));
      if (more.energies.empty()) break;
      const double e0 = *std::min_element(res.energies.begin(), res.energies.end());
      const double emax = *std::max_element(res.energies.begin(), res.energies.end());
      const double margin = 1e-4 * res.spectral_width;
      if (more.energies.front() > e0 + margin && more.energies.front() >= emax - margin) break;
      if (opt.tol < 1e-6) more = lz.solve(1, locked, opt.tol, &more.vectors.front());
      const double e = more.energies.front();
      const bool in_ground = std::abs(e - e0) <= thr || e < e0;
      if (!in_ground && e >= emax - thr) break;
      res.energies.push_back(e);
      res.vectors.push_back(std::move(more.vectors.front()));
      // keep k states plus the full ground multiplet
      const double new_e0 = std::min(e0, e);
      auto count_ground = [&] {
        return std::count_if(res.energies.begin(), res.energies.end(),
                             [&](double x) { return x - new_e0 <= thr; });
      };
      while (static_cast<int>(res.energies.size()) > std::max<long>(opt.k, count_ground())) {
        const auto it = std::max_element(res.energies.begin(), res.energies.end());
        const auto idx = static_cast<std::size_t>(it - res.energies.begin());
        res.energies.erase(it);
        res.vectors.erase(res.vectors.begin() + static_cast<std::ptrdiff_t>(idx));
      }
    }
  }
  res.matvecs = lz.matvecs;
  finalize(op, res, opt.degeneracy_tol);
  return res;
}

SpectralResult dense_spectrum(const SparseOperator& op, std::size_t max_dim) {
  if (op.dim() > max_dim)
    throw std::invalid_argument("dense_spectrum: dimension " + std::to_string(op.dim()) + " exceeds " +
                                std::to_string(max_dim));
  const Eigen::MatrixXcd H = op.to_dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success) throw SolverFailure("dense eigensolver failed", 0.0);
  SpectralResult res;
  const auto n = static_cast<Eigen::Index>(op.dim());
  for (Eigen::Index i = 0; i < n; ++i) {
    res.energies.push_back(es.eigenvalues()(i));
    CVector v(op.dim());
    for (Eigen::Index r = 0; r < n; ++r) v[static_cast<std::size_t>(r)] = es.eigenvectors()(r, i);
    res.vectors.push_back(std::move(v));
  }
  res.spectral_width = res.energies.back() - res.energies.front();
  finalize(op, res, 1e-8);
  return res;
}

}  // namespace zigzag
