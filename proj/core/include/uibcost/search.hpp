// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "uibcost/cost.hpp"
#include "uibcost/network.hpp"
#include "uibcost/roofline.hpp"

namespace uibcost::search {

using ir::NetworkSpec;

// One searchable stage: the first block strides by 2, all blocks share the
// stage filter count, each block slot carries its own UIB options.
struct StageSpec {
  std::vector<int> depth_choices;          // number of blocks
  std::vector<int> filter_choices;         // output channels
  std::vector<int> dw_choices = {0, 3, 5}; // per optional DW: 0 = absent
  std::vector<int> expansion_choices = {4};
  int max_depth() const;
};

// Fixed stem (Conv2D 3x3 s2 + FusedIB s2), fixed MobileNetV3-style head,
// searchable middle stages.
struct SearchSpace {
  int input_res = 224;
  int stem_c = 32;
  int stem_fused_expansion = 4;  // FusedIB expanded = ratio * stem_c
  int stem_fused_out = 32;
  std::vector<StageSpec> stages;

  // total configurations; saturates at huge sizes
  double size() const;
};

// Genome: per stage one depth index and one filter index; per block slot
// (stage, position) indices into dw_choices for both DWs and into
// expansion_choices. Slots beyond the chosen depth are carried but inert.
struct Candidate {
  std::vector<int> depth_idx;
  std::vector<int> filter_idx;
  std::vector<std::vector<int>> start_dw_idx;  // [stage][slot]
  std::vector<std::vector<int>> mid_dw_idx;
  std::vector<std::vector<int>> expansion_idx;

  std::uint64_t hash() const;
  bool operator==(const Candidate&) const = default;
};

NetworkSpec realize(const SearchSpace& space, const Candidate& cand);

// TuNAS-style soft constraint: quality + beta * |cost/cost_target - 1|.
struct RewardConfig {
  double cost_target = 1.0;
  double beta = -1.0;  // must be < 0
  enum class CostFn { Macs, Roofline, GeoMean } cost_fn = CostFn::Macs;
  // for Roofline: one target; for GeoMean: several
  std::vector<roofline::HardwareTarget> targets;
};

double reward(double quality, double cost, const RewardConfig& cfg);
double candidate_cost(const cost::CostReport& report, const RewardConfig& cfg);

// Quality stand-ins for trained accuracy.
using QualityOracle = std::function<double(const NetworkSpec&)>;

struct SyntheticCapacityParams {
  double alpha = 0.5;   // * log(params)
  double gamma = 0.5;   // * log(macs)
  double delta = 0.02;  // * fraction of blocks with any depthwise conv
};

// alpha*log(params) + gamma*log(macs) + delta * (#blocks with any DW / #blocks)
double synthetic_capacity(const NetworkSpec& net,
                          const SyntheticCapacityParams& params = {});
QualityOracle make_synthetic_oracle(SyntheticCapacityParams params = {});

// Published top-1 for the table's model names and the registry spellings.
// Throws UnknownModel on a miss.
double table_lookup(const std::string& model_name);

struct EvalRecord {
  std::uint64_t candidate_hash = 0;
  double quality = 0.0;
  double cost = 0.0;
  double reward = 0.0;
  int generation = 0;
};

struct SearchResult {
  Candidate best;
  NetworkSpec best_net;
  double best_reward = 0.0;
  double best_quality = 0.0;
  double best_cost = 0.0;
  std::vector<EvalRecord> log;
  std::uint64_t evaluations = 0;
};

enum class SearchPhase {
  Coarse,    // depth + filters only; UIB pinned to IB(mid=3), expansion 4
  Fine,      // DW options only; depth + filters frozen from a coarse result
  OneStage,  // full joint space
};

// Evolutionary search (population 32, tournament 4, single-gene mutation)
// with exhaustive enumeration whenever the phase's space fits the budget.
// Deterministic per seed.
SearchResult coarse_search(const SearchSpace& space, const QualityOracle& oracle,
                           const RewardConfig& cfg, std::uint64_t budget,
                           std::uint64_t seed);
SearchResult fine_search(const SearchSpace& space, const Candidate& frozen,
                         const QualityOracle& oracle, const RewardConfig& cfg,
                         std::uint64_t budget, std::uint64_t seed);
SearchResult one_stage_search(const SearchSpace& space,
                              const QualityOracle& oracle,
                              const RewardConfig& cfg, std::uint64_t budget,
                              std::uint64_t seed);

struct TwoStageResult {
  SearchResult coarse;
  SearchResult fine;
};

TwoStageResult two_stage_search(const SearchSpace& space,
                                const QualityOracle& oracle,
                                const RewardConfig& cfg,
                                std::uint64_t coarse_budget,
                                std::uint64_t fine_budget, std::uint64_t seed);

std::string eval_log_to_csv(const std::vector<EvalRecord>& log);

}  // namespace uibcost::search
