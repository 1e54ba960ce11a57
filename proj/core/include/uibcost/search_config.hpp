// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "uibcost/search.hpp"

namespace uibcost::search {

// JSON search configuration (see README for the schema): space definition,
// oracle choice, reward config, budgets, seed, mode.
struct SearchConfig {
  SearchSpace space;
  std::string oracle = "synthetic";  // "synthetic" or "table"
  SyntheticCapacityParams synthetic_params;
  RewardConfig reward;
  std::uint64_t coarse_budget = 2000;
  std::uint64_t fine_budget = 2000;
  std::uint64_t one_stage_budget = 4000;
  std::uint64_t seed = 0;
  std::string mode = "two-stage";  // "two-stage" | "one-stage" | "coarse" | "fine"
};

SearchConfig parse_search_config(const std::string& json_text);
SearchConfig load_search_config(const std::string& path);

QualityOracle oracle_from_config(const SearchConfig& cfg);

}  // namespace uibcost::search
