#include "hypmin/barriers.hpp"
#include "hypmin/geometry.hpp"
#include "hypmin/grid.hpp"
#include "hypmin/solver.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace hypmin;

namespace {

Eigen::VectorXd ball_field(const Grid& grid, double tau) {
  Eigen::VectorXd u(grid.size());
  for (int k = 0; k < grid.size(); ++k)
    u[k] = lifted_ball_solution(1.0, tau, grid.node(k).x.norm());
  return u;
}

void BM_Residual(benchmark::State& state) {
  const Grid grid(make_disk(1.0), 1.0 / static_cast<double>(state.range(0)));
  const auto u = ball_field(grid, 1e-2);
  for (auto _ : state) benchmark::DoNotOptimize(residual_F(grid, u, 1e-2));
  state.counters["nodes"] = grid.size();
}
BENCHMARK(BM_Residual)->Arg(32)->Arg(64)->Arg(128);

void BM_Jacobian(benchmark::State& state) {
  const Grid grid(make_disk(1.0), 1.0 / static_cast<double>(state.range(0)));
  const auto u = ball_field(grid, 1e-2);
  for (auto _ : state) benchmark::DoNotOptimize(jacobian_F(grid, u, 1e-2));
  state.counters["nodes"] = grid.size();
}
BENCHMARK(BM_Jacobian)->Arg(32)->Arg(64)->Arg(128);

void BM_GridBuild(benchmark::State& state) {
  const auto disk = make_disk(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(Grid(disk, 1.0 / static_cast<double>(state.range(0))));
}
BENCHMARK(BM_GridBuild)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_DiskSolve(benchmark::State& state) {
  const Grid grid(make_disk(1.0), 1.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(newton_solve(grid));
}
BENCHMARK(BM_DiskSolve)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Certification(benchmark::State& state) {
  const auto cap = make_power_cap(3.0, 1.0, 0.5);
  const auto params = BarrierParams::power_type(3.0, choose_epsilon(3.0, 1.0, 0.5), 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(certify_supersolution(params, cap, static_cast<int>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Certification)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
