// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <cmath>

#include "uibcost/builders.hpp"
#include "uibcost/executor.hpp"

using namespace uibcost;
using namespace uibcost::exec;
using namespace uibcost::ir;

TEST_CASE("identity 1x1 conv reproduces a non-negative input") {
  BlockSpec b{Conv2D{1, 1, 12, true, false, false}};
  const Tensor in = random_tensor({5, 5, 12}, 3, 0.0f, 1.0f);
  const BlockWeights w = make_weights(b, 12, 0, WeightInit::Identity);
  const Tensor out = run_block(b, in, w);
  REQUIRE(out.data.size() == in.data.size());
  for (size_t i = 0; i < in.data.size(); ++i)
    CHECK(out.data[i] == doctest::Approx(in.data[i]).epsilon(1e-6));
}

TEST_CASE("zeroed conv weights make a residual block a pure skip") {
  UIB u;
  u.mid_dw = 3;
  u.expanded_c = 32;
  u.out_c = 8;
  BlockSpec b{u};
  const Tensor in = random_tensor({6, 6, 8}, 11);
  const BlockWeights w = make_weights(b, 8, 0, WeightInit::Zero);
  Tensor out = run_block(b, in, w);
  // the block output is exactly zero, so the skip connection returns x
  for (float v : out.data) CHECK(v == 0.0f);
  for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += in.data[i];
  for (size_t i = 0; i < out.data.size(); ++i) CHECK(out.data[i] == in.data[i]);
}

TEST_CASE("executed shapes equal propagated shapes for conv-s at table sizes") {
  const NetworkSpec net = build_mnv4(Mnv4Variant::ConvS);
  const auto shapes = propagate_shapes(net);
  for (size_t i = 0; i < net.blocks.size(); ++i) {
    const Tensor in = random_tensor(shapes[i].in, 100 + i);
    const BlockWeights w = make_weights(net.blocks[i], shapes[i].in.c, 7 * i);
    // run_block itself asserts executed == propagated and throws otherwise
    const Tensor out = run_block(net.blocks[i], in, w);
    CHECK(out.shape == shapes[i].out);
  }
}

TEST_CASE("MQA attention rows sum to one") {
  BlockSpec b{MobileMQA{2, 64, 2}};
  const Tensor in = random_tensor({16, 16, 128}, 5);
  const BlockWeights w = make_weights(b, 128, 9);
  MqaProbe probe;
  run_block(b, in, w, &probe);
  REQUIRE(probe.row_sums.size() == 2 * 16 * 16);  // heads x query tokens
  for (double s : probe.row_sums) CHECK(std::abs(s - 1.0) < 1e-5);
}

TEST_CASE("MQA output is invariant to a common logit shift") {
  BlockSpec b{MobileMQA{2, 64, 1}};
  const Tensor in = random_tensor({8, 8, 128}, 21);
  const BlockWeights w = make_weights(b, 128, 22);
  MqaProbe none;
  MqaProbe shifted;
  shifted.logit_shift = 3.7;
  const Tensor a = run_block(b, in, w, &none);
  const Tensor c = run_block(b, in, w, &shifted);
  for (size_t i = 0; i < a.data.size(); ++i)
    CHECK(a.data[i] == doctest::Approx(c.data[i]).epsilon(1e-5));
}

TEST_CASE("MQA keeps the token count regardless of KV stride") {
  const Tensor in = random_tensor({16, 16, 128}, 5);
  BlockSpec kv1{MobileMQA{2, 64, 1}};
  BlockSpec kv2{MobileMQA{2, 64, 2}};
  const Tensor o1 = run_block(kv1, in, make_weights(kv1, 128, 9));
  const Tensor o2 = run_block(kv2, in, make_weights(kv2, 128, 9));
  CHECK(o1.shape == in.shape);
  CHECK(o2.shape == in.shape);
}

TEST_CASE("average pool produces channel means") {
  BlockSpec b{AvgPool{}};
  Tensor in = make_tensor({2, 2, 2});
  in.at(0, 0, 0) = 1; in.at(0, 1, 0) = 2; in.at(1, 0, 0) = 3; in.at(1, 1, 0) = 6;
  in.at(0, 0, 1) = -4; in.at(0, 1, 1) = 4; in.at(1, 0, 1) = 0; in.at(1, 1, 1) = 0;
  const Tensor out = run_block(b, in, {});
  CHECK(out.shape == TensorShape{1, 1, 2});
  CHECK(out.at(0, 0, 0) == doctest::Approx(3.0));
  CHECK(out.at(0, 0, 1) == doctest::Approx(0.0));
}

TEST_CASE("conv-s smoke run at 64px produces 1000 finite logits") {
  const NetworkSpec net = build_mnv4(Mnv4Variant::ConvS);
  RunOptions opt;
  opt.seed = 123;
  opt.downsample_resolution = 64;
  const Tensor out = run_network(net, opt);
  CHECK(out.shape == TensorShape{1, 1, 1000});
  for (float v : out.data) CHECK(std::isfinite(v));
}

TEST_CASE("runs are deterministic per seed") {
  const NetworkSpec net = build_mnv4(Mnv4Variant::ConvS);
  RunOptions opt;
  opt.seed = 9;
  opt.downsample_resolution = 32;
  const Tensor a = run_network(net, opt);
  const Tensor b = run_network(net, opt);
  CHECK(a.data == b.data);
  opt.seed = 10;
  const Tensor c = run_network(net, opt);
  bool any_diff = false;
  for (size_t i = 0; i < a.data.size(); ++i) any_diff |= a.data[i] != c.data[i];
  CHECK(any_diff);
}

TEST_CASE("odd spatial extents stride cleanly through a whole net") {
  NetworkSpec net;
  net.name = "odd";
  net.input_res = 17;
  net.input_c = 3;
  net.blocks.push_back({Conv2D{3, 2, 6, true, false, false}});
  UIB u;
  u.start_dw = 5;
  u.mid_dw = 3;
  u.expanded_c = 12;
  u.out_c = 6;
  u.stride = 2;
  net.blocks.push_back({u});
  net.blocks.push_back({AvgPool{}});
  net.blocks.push_back({Dense{4, true}});
  const Tensor out = run_network(net, {});
  CHECK(out.shape == TensorShape{1, 1, 4});
}
