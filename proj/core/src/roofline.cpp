// SPDX-License-Identifier: Apache-2.0
#include "uibcost/roofline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace uibcost::roofline {

LatencyBreakdown predict_latency(const cost::CostReport& report,
                                 const HardwareTarget& target) {
  if (target.peak_macs_per_sec <= 0) throw Error("peak must be > 0");
  if (target.ridge_point < 0) throw Error("ridge point must be >= 0");
  LatencyBreakdown out;
  out.per_block_s.reserve(report.per_block.size());
  for (const cost::BlockCost& b : report.per_block) {
    const double compute = double(b.macs);
    const double memory = double(b.total_bytes()) * target.ridge_point;
    const double t = std::max(compute, memory) / target.peak_macs_per_sec;
    out.per_block_s.push_back(t);
    out.total_s += t;
  }
  return out;
}

std::vector<double> default_ridge_sweep() {
  return {0.0, 1.0, 5.0, 10.0, 50.0, 100.0, 500.0};
}

SweepTable sweep_ridge_points(const std::vector<cost::CostReport>& reports,
                              const std::vector<double>& ridge_points,
                              double peak_macs_per_sec) {
  if (ridge_points.empty()) throw Error("empty ridge point list");
  SweepTable t;
  t.ridge_points = ridge_points;
  for (const auto& r : reports) {
    t.models.push_back(r.model);
    std::vector<double> row;
    row.reserve(ridge_points.size());
    for (double rp : ridge_points) {
      if (rp < 0) throw Error("ridge point must be >= 0");
      HardwareTarget hw{"sweep", rp, peak_macs_per_sec, r.dtype};
      row.push_back(predict_latency(r, hw).total_s);
    }
    t.latency_s.push_back(std::move(row));
  }
  return t;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  const size_t n = v.size();
  std::vector<size_t> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double rank = (double(i) + double(j)) / 2.0 + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[idx[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const size_t n = a.size();
  double ma = 0, mb = 0;
  for (size_t i = 0; i < n; ++i) { ma += a[i]; mb += b[i]; }
  ma /= double(n);
  mb /= double(n);
  double num = 0, da = 0, db = 0;
  for (size_t i = 0; i < n; ++i) {
    num += (a[i] - ma) * (b[i] - mb);
    da += (a[i] - ma) * (a[i] - ma);
    db += (b[i] - mb) * (b[i] - mb);
  }
  return num / std::sqrt(da * db);
}

}  // namespace

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size())
    throw LengthMismatch("spearman: length mismatch " +
                         std::to_string(xs.size()) + " vs " +
                         std::to_string(ys.size()));
  if (xs.size() < 2) throw LengthMismatch("spearman: need >= 2 samples");
  auto constant = [](const std::vector<double>& v) {
    for (double x : v)
      if (x != v[0]) return false;
    return true;
  };
  if (constant(xs) || constant(ys))
    throw DegenerateInput("spearman: constant input has no rank ordering");
  return pearson(average_ranks(xs), average_ranks(ys));
}

namespace {

struct Objective {
  double rs;
  double log_rmse;

  // maximize rs, then minimize residual, then prefer smaller rp
  bool better_than(const Objective& o, double rp, double orp) const {
    if (rs != o.rs) return rs > o.rs;
    if (log_rmse != o.log_rmse) return log_rmse < o.log_rmse;
    return rp < orp;
  }
};

}  // namespace

RidgeFit fit_ridge_point(const std::vector<cost::CostReport>& reports,
                         const std::vector<double>& measured_latency_s) {
  if (reports.size() != measured_latency_s.size())
    throw LengthMismatch("fit_ridge_point: reports vs measurements");
  if (reports.size() < 3)
    throw InsufficientData("fit_ridge_point: need >= 3 measured models");
  for (double m : measured_latency_s)
    if (!(m > 0)) throw NonPositiveLatency("measured latency must be > 0");

  const size_t n = reports.size();
  auto evaluate = [&](double rp) {
    std::vector<double> raw(n);  // predicted latency at unit peak
    HardwareTarget hw{"fit", rp, 1.0, reports[0].dtype};
    for (size_t i = 0; i < n; ++i)
      raw[i] = predict_latency(reports[i], hw).total_s;
    const double rs = spearman(raw, measured_latency_s);
    double mean = 0;
    std::vector<double> logs(n);
    for (size_t i = 0; i < n; ++i) {
      logs[i] = std::log(raw[i]) - std::log(measured_latency_s[i]);
      mean += logs[i];
    }
    mean /= double(n);
    double rmse = 0;
    for (double l : logs) rmse += (l - mean) * (l - mean);
    rmse = std::sqrt(rmse / double(n));
    return std::pair<Objective, double>{{rs, rmse}, mean};
  };

  double best_rp = 0.0;
  Objective best{-2.0, 1e300};
  double best_log_peak = 0.0;
  auto consider = [&](double rp) {
    auto [obj, log_scale] = evaluate(rp);
    if (obj.better_than(best, rp, best_rp)) {
      best = obj;
      best_rp = rp;
      best_log_peak = log_scale;
    }
  };

  for (int i = 0; i <= 100; ++i) consider(5.0 * i);
  // refine on a 0.1 grid around the coarse optimum (exact decimal steps)
  const long centi_lo = std::max(0L, std::lround(best_rp * 10.0) - 50);
  const long centi_hi = std::min(5000L, std::lround(best_rp * 10.0) + 50);
  for (long c = centi_lo; c <= centi_hi; ++c) consider(double(c) / 10.0);

  RidgeFit fit;
  fit.ridge_point = best_rp;
  fit.spearman_r = best.rs;
  // raw = pred_at_unit_peak; measured = raw / peak  =>  log peak = mean(log
  // raw - log measured)
  fit.peak_macs_per_sec = std::exp(best_log_peak);
  return fit;
}

std::string sweep_to_csv(const SweepTable& table) {
  std::ostringstream os;
  os << "model";
  for (double rp : table.ridge_points) os << ",rp_" << rp;
  os << '\n';
  for (size_t i = 0; i < table.models.size(); ++i) {
    os << table.models[i];
    for (double v : table.latency_s[i]) os << ',' << v;
    os << '\n';
  }
  return os.str();
}

}  // namespace uibcost::roofline
