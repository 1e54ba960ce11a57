// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "uibcost/types.hpp"

namespace uibcost::metrics {

// Per-target latencies of one model, aligned to a fixed target order.
using LatencyVector = std::vector<double>;
// Per-target normalization constants (reference-model latencies).
using NormalizationFactors = std::vector<double>;

// (1/N) * sum L_i / C_i. Sensitive to the choice of C: a 2x slowdown plus a
// 2x speedup averages to 1.25, not 1.
double arith_mean_normalized(const LatencyVector& latencies,
                             const NormalizationFactors& factors);

// (prod L_i)^(1/N), computed in log space. Satisfies
// geo_mean(L/C) == geo_mean(L)/geo_mean(C), so rankings are normalization
// invariant.
double geo_mean(const LatencyVector& latencies);

struct ModelPoint {
  double latency = 0.0;  // aggregated latency, lower is better
  double accuracy = 0.0; // top-1, higher is better
  std::string name;
};

// Strict Pareto dominance: a is at least as good on both axes and strictly
// better on one.
bool dominates(const ModelPoint& a, const ModelPoint& b);

// Maximal subset under `dominates`, sorted by latency ascending (stable for
// equal latencies).
std::vector<ModelPoint> pareto_front(const std::vector<ModelPoint>& points);

}  // namespace uibcost::metrics
