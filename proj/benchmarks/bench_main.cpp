#include "spdekit/assembly.hpp"
#include "spdekit/cholesky.hpp"
#include "spdekit/fractional.hpp"
#include "spdekit/mesh.hpp"
#include "spdekit/precision.hpp"

#include <benchmark/benchmark.h>

using namespace spdekit;

namespace {

Mesh grid(benchmark::State& state) {
  const Index cells = state.range(0);
  return make_grid_mesh(0.0, 1.0, 0.0, 1.0, cells, cells);
}

SparseSymMatrix matern_precision(const Mesh& mesh) {
  return build_precision(FieldModel::stationary(mesh, 2.0, 10.0, 1.0), assemble_fem(mesh));
}

void BM_Assemble(benchmark::State& state) {
  const Mesh mesh = grid(state);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_fem(mesh));
  state.counters["n"] = static_cast<double>(mesh.num_vertices());
}
BENCHMARK(BM_Assemble)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_BuildPrecision(benchmark::State& state) {
  const Mesh mesh = grid(state);
  const FemMatrices fem = assemble_fem(mesh);
  const FieldModel model = FieldModel::stationary(mesh, 2.0, 10.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(build_precision(model, fem));
}
BENCHMARK(BM_BuildPrecision)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void factorize(benchmark::State& state, Ordering ordering) {
  const SparseSymMatrix q = matern_precision(grid(state));
  Index fill = 0;
  for (auto _ : state) {
    const CholeskyFactor f = CholeskyFactor::factorize(q, ordering);
    fill = f.nnz();
  }
  state.counters["nnz_L"] = static_cast<double>(fill);
}

void BM_FactorizeAmd(benchmark::State& state) { factorize(state, Ordering::amd); }
BENCHMARK(BM_FactorizeAmd)->Arg(25)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_FactorizeNatural(benchmark::State& state) { factorize(state, Ordering::natural); }
BENCHMARK(BM_FactorizeNatural)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  const SparseSymMatrix q = matern_precision(grid(state));
  const CholeskyFactor f = CholeskyFactor::factorize(q);
  const Vector b = Vector::Ones(q.size());
  for (auto _ : state) benchmark::DoNotOptimize(f.solve(b));
}
BENCHMARK(BM_Solve)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Sample(benchmark::State& state) {
  const CholeskyFactor f = CholeskyFactor::factorize(matern_precision(grid(state)));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(f.sample(++seed));
}
BENCHMARK(BM_Sample)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_SelectedInverse(benchmark::State& state) {
  const CholeskyFactor f = CholeskyFactor::factorize(matern_precision(grid(state)));
  for (auto _ : state) benchmark::DoNotOptimize(f.selected_inverse());
}
BENCHMARK(BM_SelectedInverse)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_BuildFractional(benchmark::State& state) {
  const Mesh mesh = grid(state);
  const FemMatrices fem = assemble_fem(mesh);
  const FieldModel model = FieldModel::stationary(mesh, 1.5, 10.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(build_fractional(model, fem));
}
BENCHMARK(BM_BuildFractional)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
