#include <benchmark/benchmark.h>

#include "latdual/groups.hpp"
#include "latdual/harmonic.hpp"
#include "latdual/ising.hpp"
#include "latdual/surface.hpp"
#include "latdual/turaev_viro.hpp"

using namespace latdual;

static void BM_FourierAbelian(benchmark::State& state) {
  auto a = build_group("Z4xZ4xZ4").abelian();
  WeightFunction raw(a.order()), theta(a.order());
  for (int x = 0; x < a.order(); ++x) raw[x] = 1.0 / (1 + x % 7);
  for (int x = 0; x < a.order(); ++x) theta[x] = 0.5 * (raw[x] + raw[a.neg(x)]);
  for (auto _ : state) {
    auto f = fourier_abelian_even(theta, a);
    benchmark::DoNotOptimize(f);
  }
}
BENCHMARK(BM_FourierAbelian);

static void BM_Irreducibles(benchmark::State& state) {
  auto g = build_group("A4");
  for (auto _ : state) {
    auto irr = irreducibles(g);
    benchmark::DoNotOptimize(irr);
  }
}
BENCHMARK(BM_Irreducibles);

static void BM_PartitionVector(benchmark::State& state) {
  auto lat = torus_lattice(3, 3);
  auto a = build_group("Z2").abelian();
  WeightFunction theta = {1.0, 0.4};
  for (auto _ : state) {
    auto pv = partition_vector(lat, a, theta, {});
    benchmark::DoNotOptimize(pv);
  }
}
BENCHMARK(BM_PartitionVector);

static void BM_KwCheckTorus33Z2(benchmark::State& state) {
  auto lat = torus_lattice(3, 3);
  auto a = build_group("Z2").abelian();
  WeightFunction theta = {1.0, 0.4};
  for (auto _ : state) {
    auto rep = kw_dual_check(lat, a, theta, {});
    benchmark::DoNotOptimize(rep);
  }
}
BENCHMARK(BM_KwCheckTorus33Z2);

static void BM_TransferMatrixMu2(benchmark::State& state) {
  auto g = build_group("Z2");
  WeightFunction theta = {1.0, 0.4};
  for (auto _ : state) {
    auto t = transfer_matrix({6}, g, theta, 0);
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(BM_TransferMatrixMu2);

static void BM_VertexProjectorRepS3(benchmark::State& state) {
  auto g = build_group("S3");
  auto b = FusionBackend::make(BackendKind::rep, g);
  auto ss = state_space(b, sphere_tetra());
  for (auto _ : state) {
    auto p = vertex_projector(ss, 0);
    benchmark::DoNotOptimize(p);
  }
}
BENCHMARK(BM_VertexProjectorRepS3);

BENCHMARK_MAIN();
