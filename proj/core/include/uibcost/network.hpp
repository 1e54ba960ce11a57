// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uibcost/block.hpp"

namespace uibcost::ir {

// Block-level IR of a whole network. Immutable by convention after
// construction; every analysis takes it by const reference.
struct NetworkSpec {
  std::string name;
  int input_res = 224;  // square input side
  int input_c = 3;
  std::vector<BlockSpec> blocks;
  std::optional<double> top1_accuracy;  // ingested metadata, never computed

  bool operator==(const NetworkSpec& o) const;
};

struct BlockShapes {
  TensorShape in;
  TensorShape out;
  // True for shape-preserving blocks that carry an implicit skip connection
  // (stride-1 UIB with in_c == out_c, and MobileMQA).
  bool residual = false;
};

// Walks the block list, checking channel consistency and computing the
// input/output shape of every block. Strided blocks halve spatial dims with
// ceiling division. Throws ChannelMismatch on inconsistency.
std::vector<BlockShapes> propagate_shapes(const NetworkSpec& net);

// Shape produced by a single block for a given input.
TensorShape block_output_shape(const BlockSpec& block, const TensorShape& in);

// Structural validation beyond shapes: kernels odd and in {1,3,5}, strides
// in {1,2}, channel counts positive. Throws ValidationError.
void validate(const NetworkSpec& net);

}  // namespace uibcost::ir
