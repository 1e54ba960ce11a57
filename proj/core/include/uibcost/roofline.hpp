// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uibcost/cost.hpp"

namespace uibcost::roofline {

// A named execution target for the roofline model. ridge_point is the
// operational intensity (MACs/byte) where the target transitions from
// memory-bound to compute-bound; peak_macs_per_sec scales predictions into
// absolute time.
struct HardwareTarget {
  std::string name;
  double ridge_point = 0.0;       // MACs per byte, >= 0
  double peak_macs_per_sec = 1e12;
  DtypeWidths dtype = DtypeWidths::int8();
};

struct LatencyBreakdown {
  std::vector<double> per_block_s;
  double total_s = 0.0;
};

// Classic roofline, composed per block: each block costs
// max(macs, bytes * ridge_point) / peak seconds; the network is the sum.
LatencyBreakdown predict_latency(const cost::CostReport& report,
                                 const HardwareTarget& target);

// Ridge points spanning the 0 (compute-only) .. 500 (bandwidth-starved
// accelerator) MACs/byte design range.
std::vector<double> default_ridge_sweep();

struct SweepTable {
  std::vector<std::string> models;
  std::vector<double> ridge_points;
  // predicted seconds, [model][rp]
  std::vector<std::vector<double>> latency_s;
};

SweepTable sweep_ridge_points(const std::vector<cost::CostReport>& reports,
                              const std::vector<double>& ridge_points,
                              double peak_macs_per_sec = 1e12);

// Spearman rank correlation with average ranks for ties.
// Throws LengthMismatch and DegenerateInput (constant input).
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

struct RidgeFit {
  double ridge_point = 0.0;
  double peak_macs_per_sec = 0.0;  // log-space least-squares scale
  double spearman_r = 0.0;         // rank correlation at the fitted RP
};

// Grid search over [0, 500] (coarse step 5, refined to 0.1) choosing the RP
// that maximizes Spearman correlation between predicted and measured
// latency. Rank correlation is piecewise constant in RP, so ties are broken
// by the smaller log-space residual of the scale fit, then toward smaller
// RP. Requires >= 3 measured models.
RidgeFit fit_ridge_point(const std::vector<cost::CostReport>& reports,
                         const std::vector<double>& measured_latency_s);

std::string sweep_to_csv(const SweepTable& table);

}  // namespace uibcost::roofline
