// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <random>

#include "uibcost/builders.hpp"
#include "uibcost/cost.hpp"
#include "uibcost/executor.hpp"
#include "uibcost/metrics.hpp"
#include "uibcost/roofline.hpp"
#include "uibcost/search.hpp"

using namespace uibcost;

static void BM_NetworkCostConvL(benchmark::State& state) {
  const ir::NetworkSpec net = ir::build_mnv4(ir::Mnv4Variant::ConvL);
  for (auto _ : state)
    benchmark::DoNotOptimize(cost::network_cost(net).total_macs);
}
BENCHMARK(BM_NetworkCostConvL);

static void BM_BuildHybridL(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(ir::build_mnv4(ir::Mnv4Variant::HybridL).blocks.size());
}
BENCHMARK(BM_BuildHybridL);

static void BM_RidgeSweep(benchmark::State& state) {
  std::vector<cost::CostReport> reports;
  for (const auto& n : ir::registry_names())
    reports.push_back(cost::network_cost(ir::build_by_name(n)));
  const auto rps = roofline::default_ridge_sweep();
  for (auto _ : state)
    benchmark::DoNotOptimize(
        roofline::sweep_ridge_points(reports, rps).latency_s.size());
}
BENCHMARK(BM_RidgeSweep);

static void BM_RidgeFit(benchmark::State& state) {
  std::vector<cost::CostReport> reports;
  std::vector<double> measured;
  for (const auto& n : ir::registry_names()) {
    reports.push_back(cost::network_cost(ir::build_by_name(n)));
    measured.push_back(
        roofline::predict_latency(reports.back(), {"gen", 120.0, 1e12}).total_s);
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(
        roofline::fit_ridge_point(reports, measured).ridge_point);
}
BENCHMARK(BM_RidgeFit);

static void BM_ParetoFront1000(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lat(0.5, 300.0), acc(55.0, 95.0);
  std::vector<metrics::ModelPoint> pts;
  for (int i = 0; i < 1000; ++i)
    pts.push_back({lat(rng), acc(rng), "m" + std::to_string(i)});
  for (auto _ : state)
    benchmark::DoNotOptimize(metrics::pareto_front(pts).size());
}
BENCHMARK(BM_ParetoFront1000);

static void BM_SearchEval100(benchmark::State& state) {
  search::SearchSpace sp;
  sp.input_res = 32;
  sp.stem_c = 8;
  sp.stem_fused_expansion = 2;
  sp.stem_fused_out = 8;
  search::StageSpec st;
  st.depth_choices = {1, 2, 3};
  st.filter_choices = {16, 24, 32};
  sp.stages = {st, st};
  search::RewardConfig cfg;
  cfg.cost_target = 6e6;
  const auto oracle = search::make_synthetic_oracle();
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        search::one_stage_search(sp, oracle, cfg, 100, ++seed).best_reward);
}
BENCHMARK(BM_SearchEval100);

static void BM_ExecUibBlock(benchmark::State& state) {
  ir::UIB u;
  u.start_dw = 3;
  u.mid_dw = 5;
  u.expanded_c = 256;
  u.out_c = 64;
  const ir::BlockSpec block{u};
  const exec::Tensor in = exec::random_tensor({14, 14, 64}, 3);
  const exec::BlockWeights w = exec::make_weights(block, 64, 4);
  for (auto _ : state)
    benchmark::DoNotOptimize(exec::run_block(block, in, w).data[0]);
}
BENCHMARK(BM_ExecUibBlock);

BENCHMARK_MAIN();
