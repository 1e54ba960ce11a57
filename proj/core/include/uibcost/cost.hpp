// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uibcost/network.hpp"

namespace uibcost::cost {

using ir::BlockSpec;
using ir::NetworkSpec;

// Analytic cost of one block. One MAC = one multiply-accumulate. Traffic
// model: weights read once, block input read once, block output written once
// (no fusion across blocks, intermediates inside a block stay on chip).
struct BlockCost {
  std::uint64_t macs = 0;
  std::uint64_t params = 0;
  std::uint64_t weight_bytes = 0;
  std::uint64_t act_in_bytes = 0;
  std::uint64_t act_out_bytes = 0;

  std::uint64_t total_bytes() const {
    return weight_bytes + act_in_bytes + act_out_bytes;
  }
  // MACs per byte moved; 0 traffic yields 0.
  double op_intensity() const {
    const std::uint64_t b = total_bytes();
    return b == 0 ? 0.0 : double(macs) / double(b);
  }
  BlockCost& operator+=(const BlockCost& o);
};

struct CostReport {
  std::string model;
  std::vector<std::string> block_kinds;
  std::vector<BlockCost> per_block;
  std::uint64_t total_macs = 0;
  std::uint64_t total_params = 0;
  std::uint64_t total_bytes = 0;
  DtypeWidths dtype;

  double macs_g() const { return double(total_macs) / 1e9; }
  double params_m() const { return double(total_params) / 1e6; }
  double op_intensity() const {
    return total_bytes == 0 ? 0.0 : double(total_macs) / double(total_bytes);
  }
};

BlockCost block_cost(const BlockSpec& block, const TensorShape& in,
                     DtypeWidths dtype = DtypeWidths::int8());

CostReport network_cost(const NetworkSpec& net,
                        DtypeWidths dtype = DtypeWidths::int8());

// MQA-vs-MHSA economics: cost of `base` with `count` attention blocks of the
// chosen variant appended to the given stage (stage = index into the list of
// searchable stages, negative counts from the back; -1 = last stage). MHSA is
// modeled with per-head K/V (4*d^2 projection weights at model dim d); MQA
// with full-width queries and a shared single K/V head (2*d^2 + 2*d*d_head).
enum class AttentionVariant { MHSA, MQA };

struct AttentionDelta {
  CostReport base;
  CostReport with_attention;
  // cost attributable to the inserted attention blocks alone
  std::uint64_t attention_macs = 0;
  std::uint64_t attention_params = 0;
};

AttentionDelta attention_delta(const NetworkSpec& base, AttentionVariant variant,
                               int count, int stage = -1,
                               DtypeWidths dtype = DtypeWidths::int8());

// Relative MAC change from disabling K/V spatial reduction: compares the net
// as-is (>=1 MQA block with kv_stride 2) against the same net with every MQA
// kv_stride forced to 1. Returns (macs_kv2 - macs_kv1) / macs_kv1, i.e. a
// negative number = savings from downsampling.
double kv_downsample_delta(const NetworkSpec& net,
                           DtypeWidths dtype = DtypeWidths::int8());

std::string to_csv(const CostReport& report);
std::string to_json(const CostReport& report);

}  // namespace uibcost::cost
