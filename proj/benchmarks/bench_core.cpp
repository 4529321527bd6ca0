// Matvec, operator assembly and ground-state solves.

#include <benchmark/benchmark.h>

#include <map>
#include <memory>
#include <random>

#include "zigzag/eigensolver.hpp"
#include "zigzag/hamiltonian.hpp"
#include "zigzag/observables.hpp"

using namespace zigzag;

namespace {

struct Fixture {
  ModelParams p;
  BasisSector sector;
  SparseOperator H;
  explicit Fixture(int L) : p(ModelParams::half_filled(L, 0.5, 1.0, Boundary::Periodic)), sector(L, L / 2) {
    H = build_boson(p, sector);
  }
};

Fixture& fixture(int L) {
  static std::map<int, std::unique_ptr<Fixture>> cache;
  auto& f = cache[L];
  if (!f) f = std::make_unique<Fixture>(L);
  return *f;
}

CVector random_state(std::size_t n) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d;
  CVector v(n);
  for (auto& x : v) x = {d(rng), d(rng)};
  return v;
}

void BM_Matvec(benchmark::State& st) {
  auto& f = fixture(static_cast<int>(st.range(0)));
  const int threads = static_cast<int>(st.range(1));
  const auto x = random_state(f.H.dim());
  CVector y(f.H.dim());
  for (auto _ : st) {
    f.H.apply(x, y, threads);
    benchmark::DoNotOptimize(y.data());
  }
  st.counters["dim"] = static_cast<double>(f.H.dim());
  st.counters["nnz/s"] =
      benchmark::Counter(static_cast<double>(f.H.nnz_offdiag()), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_Matvec)->Args({16, 1})->Args({20, 1})->Args({20, 2})->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Build(benchmark::State& st) {
  const int L = static_cast<int>(st.range(0));
  const auto p = ModelParams::half_filled(L, 0.5, 1.0, Boundary::Periodic);
  const BasisSector s(L, L / 2);
  for (auto _ : st) {
    auto H = build_boson(p, s);
    benchmark::DoNotOptimize(H.nnz_offdiag());
  }
  st.counters["dim"] = static_cast<double>(s.dim());
}
BENCHMARK(BM_Build)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Lanczos(benchmark::State& st) {
  auto& f = fixture(static_cast<int>(st.range(0)));
  LanczosOptions o;
  int matvecs = 0;
  for (auto _ : st) {
    const auto r = lanczos_ground(f.H, o);
    matvecs = r.matvecs;
    benchmark::DoNotOptimize(r.energies.front());
  }
  st.counters["matvecs"] = matvecs;
}
BENCHMARK(BM_Lanczos)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Currents(benchmark::State& st) {
  auto& f = fixture(16);
  const auto psi = lanczos_ground(f.H).vectors.front();
  for (auto _ : st) {
    double s = 0;
    for (int j = 0; j < 16; ++j) s += current_nnn(f.sector, psi, f.p, j);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_Currents)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
