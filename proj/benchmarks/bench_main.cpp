#include <benchmark/benchmark.h>

#include "sgvem/assembly.hpp"
#include "sgvem/nonlinear.hpp"

using namespace sgvem;

namespace {

PolygonalMesh bench_mesh(int cells) {
  return generate_voronoi(Rect{0.0, 1.0, 0.0, 1.0}, cells, 2, 99);
}

void bm_build_operators(benchmark::State& state) {
  const PolygonalMesh mesh = bench_mesh(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto ops = build_all_operators(mesh);
    benchmark::DoNotOptimize(ops);
  }
  state.SetItemsProcessed(state.iterations() * mesh.n_cells());
}
BENCHMARK(bm_build_operators)->Arg(100)->Arg(1000);

void bm_assemble(benchmark::State& state) {
  const PolygonalMesh mesh = bench_mesh(static_cast<int>(state.range(0)));
  const auto ops = build_all_operators(mesh);
  for (auto _ : state) {
    auto sys = assemble(mesh, ops);
    benchmark::DoNotOptimize(sys);
  }
}
BENCHMARK(bm_assemble)->Arg(1000);

void bm_product_load(benchmark::State& state) {
  const PolygonalMesh mesh = bench_mesh(static_cast<int>(state.range(0)));
  const GlobalSystem sys = assemble(mesh);
  const Nonlinearity f = sine_gordon();
  const Eigen::VectorXd u =
      interpolate(mesh, [](double x, double y) { return x * x - y; });
  for (auto _ : state) {
    Eigen::VectorXd load = product_approx_load(sys.projected_mass, u, f);
    benchmark::DoNotOptimize(load);
  }
}
BENCHMARK(bm_product_load)->Arg(1000)->Arg(5000);

void bm_quadrature_load(benchmark::State& state) {
  const PolygonalMesh mesh = bench_mesh(static_cast<int>(state.range(0)));
  const auto ops = build_all_operators(mesh);
  const Nonlinearity f = sine_gordon();
  const Eigen::VectorXd u =
      interpolate(mesh, [](double x, double y) { return x * x - y; });
  for (auto _ : state) {
    Eigen::VectorXd load = quadrature_load(mesh, ops, u, f, 4);
    benchmark::DoNotOptimize(load);
  }
}
BENCHMARK(bm_quadrature_load)->Arg(1000)->Arg(5000);

void bm_product_jacobian(benchmark::State& state) {
  const PolygonalMesh mesh = bench_mesh(static_cast<int>(state.range(0)));
  const GlobalSystem sys = assemble(mesh);
  const Nonlinearity f = sine_gordon();
  const Eigen::VectorXd u =
      interpolate(mesh, [](double x, double y) { return x * x - y; });
  for (auto _ : state) {
    SparseMat j = jacobian(0.0, 0.01, 0.5, sys, u, f);
    benchmark::DoNotOptimize(j);
  }
}
BENCHMARK(bm_product_jacobian)->Arg(1000)->Arg(5000);

void bm_quadrature_jacobian(benchmark::State& state) {
  const PolygonalMesh mesh = bench_mesh(static_cast<int>(state.range(0)));
  const auto ops = build_all_operators(mesh);
  const GlobalSystem sys = assemble(mesh, ops);
  const Nonlinearity f = sine_gordon();
  const Eigen::VectorXd u =
      interpolate(mesh, [](double x, double y) { return x * x - y; });
  const SparseMat base = sys.mass + 0.5 * 0.01 * 0.01 * sys.stiffness;
  for (auto _ : state) {
    SparseMat j = quadrature_jacobian(mesh, ops, u, f, base, 0.5, 0.01, 4);
    benchmark::DoNotOptimize(j);
  }
}
BENCHMARK(bm_quadrature_jacobian)->Arg(1000)->Arg(5000);

}  // namespace

BENCHMARK_MAIN();
