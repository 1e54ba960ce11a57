// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "uibcost/network.hpp"

namespace uibcost::ir {

enum class Mnv4Variant { ConvS, ConvM, ConvL, HybridM, HybridL };

// Reconstructs one of the five published MNv4 networks, row for row from its
// architecture table, including the MobileNetV3-style head and the published
// top-1 accuracy as metadata.
NetworkSpec build_mnv4(Mnv4Variant variant);

// Reference baselines used by the roofline correlation analysis. V3-Large is
// modeled without squeeze-excite (not representable in this IR).
NetworkSpec build_mobilenet_v1(double width = 1.0, int input_res = 224);
NetworkSpec build_mobilenet_v2(double width = 1.0, int input_res = 224);
NetworkSpec build_mobilenet_v3l(double width = 1.0, int input_res = 224);

// TF-style channel rounding used when scaling baseline widths.
int make_divisible(double v, int divisor = 8);

// MobileNetV3-style head shared by the MNv4 builders and the search space:
// 1x1 conv to 960, global pool, 1x1 conv to 1280, classifier to 1000.
void append_mobilenet_v3_head(NetworkSpec& net);

// Name-based registry covering the MNv4 models (canonical names like
// "mnv4-conv-s" plus the table spellings like "MNv4-Conv-S") and the
// baselines as they appear in data/paper_latencies.csv. Throws UnknownModel.
NetworkSpec build_by_name(const std::string& name);
bool is_known_model(const std::string& name);
std::vector<std::string> registry_names();

}  // namespace uibcost::ir
