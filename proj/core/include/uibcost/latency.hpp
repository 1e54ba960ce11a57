// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uibcost/types.hpp"

namespace uibcost::roofline {

// Measured (or predicted) latencies, models x targets. Missing entries stay
// explicit; a model with a missing cell is excluded from any aggregate that
// needs that target, never imputed.
struct LatencyMatrix {
  std::vector<std::string> models;
  std::vector<std::string> targets;
  // [model][target], nullopt = not measured
  std::vector<std::vector<std::optional<double>>> latency_ms;
  std::vector<std::optional<double>> top1;

  int model_index(const std::string& name) const;
  int target_index(const std::string& name) const;
  std::optional<double> at(const std::string& model,
                           const std::string& target) const;

  // All models with a measurement for `target`, with their latencies.
  std::vector<std::pair<std::string, double>> column(
      const std::string& target) const;
};

// Long-format CSV with header `model,target,latency_ms,top1`. Repeated
// (model,target) rows are rejected. Throws ParseError with a line number.
LatencyMatrix load_latency_csv(const std::string& path);
LatencyMatrix parse_latency_csv(const std::string& text);

}  // namespace uibcost::roofline
