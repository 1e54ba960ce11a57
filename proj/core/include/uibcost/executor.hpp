// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "uibcost/network.hpp"

namespace uibcost::exec {

using ir::BlockSpec;
using ir::NetworkSpec;

// Row-major HWC float tensor.
struct Tensor {
  TensorShape shape;
  std::vector<float> data;

  float& at(int y, int x, int c) {
    return data[(size_t(y) * shape.w + x) * shape.c + c];
  }
  float at(int y, int x, int c) const {
    return data[(size_t(y) * shape.w + x) * shape.c + c];
  }
};

Tensor make_tensor(const TensorShape& shape, float fill = 0.0f);
// Seeded uniform values in [lo, hi).
Tensor random_tensor(const TensorShape& shape, std::uint64_t seed,
                     float lo = -0.5f, float hi = 0.5f);

enum class WeightInit {
  SeededUniform,  // weights U[-0.05, 0.05], BN random per-channel affine
  Zero,           // all conv/projection weights 0, BN identity
  Identity,       // 1x1 convs get identity matrices, BN identity
};

// Opaque per-block weights; create with make_weights for the block's input
// channel count.
struct BlockWeights {
  struct Layer {
    std::vector<float> w;       // conv or projection weights
    std::vector<float> bias;
    std::vector<float> bn_scale;
    std::vector<float> bn_shift;
  };
  std::vector<Layer> layers;
};

BlockWeights make_weights(const BlockSpec& block, int in_c, std::uint64_t seed,
                          WeightInit init = WeightInit::SeededUniform);

// Numeric diagnostics for the MQA path.
struct MqaProbe {
  double logit_shift = 0.0;           // added to every attention logit
  std::vector<double> row_sums;       // post-softmax row sums, all heads
};

// Executes one block (no residual). Output shape always equals
// block_output_shape. Throws ShapeError on inconsistent inputs.
Tensor run_block(const BlockSpec& block, const Tensor& input,
                 const BlockWeights& weights, MqaProbe* probe = nullptr);

struct RunOptions {
  std::uint64_t seed = 0;
  // overrides net.input_res, e.g. 64 for a fast smoke run
  std::optional<int> downsample_resolution;
};

// Runs all blocks sequentially with residual adds where shape propagation
// flags them. Weights and input are derived deterministically from the seed.
Tensor run_network(const NetworkSpec& net, const RunOptions& options = {});

}  // namespace uibcost::exec
