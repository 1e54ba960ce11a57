// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <variant>

#include "uibcost/types.hpp"

namespace uibcost::ir {

// Plain 2d convolution. `depthwise` covers the MobileNetV1-style reference
// baselines; a depthwise conv keeps out_c == in_c.
struct Conv2D {
  int kernel = 3;
  int stride = 1;
  int out_c = 0;
  bool followed_by_bn = true;
  bool bias = false;
  bool depthwise = false;

  bool operator==(const Conv2D&) const = default;
};

// Fused inverted bottleneck: one k x k conv carrying the expansion (and the
// stride), then a 1x1 linear projection.
struct FusedIB {
  int kernel = 3;
  int stride = 1;
  int expanded_c = 0;
  int out_c = 0;

  bool operator==(const FusedIB&) const = default;
};

// The four instantiations of the universal inverted bottleneck, named by
// which optional depthwise convs are present.
enum class UibKind { IB, ConvNext, ExtraDW, FFN };

// Universal inverted bottleneck: optional DW, 1x1 expand, optional DW,
// 1x1 project. The stride lands on the middle DW when present, else on the
// start DW, else on the projection.
struct UIB {
  std::optional<int> start_dw;  // kernel size, absent = no conv
  std::optional<int> mid_dw;
  int expanded_c = 0;
  int out_c = 0;
  int stride = 1;

  UibKind kind() const {
    if (start_dw && mid_dw) return UibKind::ExtraDW;
    if (mid_dw) return UibKind::IB;
    if (start_dw) return UibKind::ConvNext;
    return UibKind::FFN;
  }

  bool operator==(const UIB&) const = default;
};

// Mobile multi-query attention. Shape preserving; kv_stride=2 applies a 3x3
// stride-2 depthwise spatial reduction to the shared K/V path.
struct MobileMQA {
  int num_heads = 0;  // 0 = derive default max(1, c/64) at use sites
  int head_dim = 64;
  int kv_stride = 1;

  int heads_for(int channels) const {
    if (num_heads > 0) return num_heads;
    return channels >= head_dim ? channels / head_dim : 1;
  }

  bool operator==(const MobileMQA&) const = default;
};

// Global average pool over the full spatial extent.
struct AvgPool {
  bool operator==(const AvgPool&) const = default;
};

struct Dense {
  int out_c = 0;
  bool bias = true;

  bool operator==(const Dense&) const = default;
};

struct BlockSpec {
  std::variant<Conv2D, FusedIB, UIB, MobileMQA, AvgPool, Dense> op;
  // Expected input channels, when known (architecture tables state them).
  // Checked during shape propagation; -1 = unconstrained.
  int expected_in_c = -1;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&op);
  }
  template <class T>
  bool is() const {
    return std::holds_alternative<T>(op);
  }
};

std::string kind_name(const BlockSpec& block);
std::string uib_kind_name(UibKind kind);

inline bool valid_kernel(int k) { return k == 1 || k == 3 || k == 5; }

}  // namespace uibcost::ir
