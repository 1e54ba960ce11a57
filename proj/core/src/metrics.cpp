// SPDX-License-Identifier: Apache-2.0
#include "uibcost/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace uibcost::metrics {

double arith_mean_normalized(const LatencyVector& latencies,
                             const NormalizationFactors& factors) {
  if (latencies.size() != factors.size())
    throw DimensionMismatch("latency/normalization dimension mismatch");
  if (latencies.empty()) throw DimensionMismatch("empty latency vector");
  double sum = 0.0;
  for (size_t i = 0; i < latencies.size(); ++i) {
    if (!(latencies[i] > 0) || !(factors[i] > 0))
      throw NonPositiveLatency("latencies and factors must be > 0");
    sum += latencies[i] / factors[i];
  }
  return sum / double(latencies.size());
}

double geo_mean(const LatencyVector& latencies) {
  if (latencies.empty()) throw DimensionMismatch("empty latency vector");
  double log_sum = 0.0;
  for (double l : latencies) {
    if (!(l > 0)) throw NonPositiveLatency("latencies must be > 0");
    log_sum += std::log(l);
  }
  return std::exp(log_sum / double(latencies.size()));
}

bool dominates(const ModelPoint& a, const ModelPoint& b) {
  const bool no_worse = a.accuracy >= b.accuracy && a.latency <= b.latency;
  const bool strictly = a.accuracy > b.accuracy || a.latency < b.latency;
  return no_worse && strictly;
}

std::vector<ModelPoint> pareto_front(const std::vector<ModelPoint>& points) {
  if (points.empty()) throw Error("pareto_front: empty point set");
  std::vector<ModelPoint> front;
  for (const ModelPoint& p : points) {
    bool dominated = false;
    for (const ModelPoint& q : points)
      if (dominates(q, p)) { dominated = true; break; }
    if (!dominated) front.push_back(p);
  }
  std::stable_sort(front.begin(), front.end(),
                   [](const ModelPoint& a, const ModelPoint& b) {
                     return a.latency < b.latency;
                   });
  return front;
}

}  // namespace uibcost::metrics
