// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include "uibcost/builders.hpp"
#include "uibcost/netspec_json.hpp"
#include "uibcost/network.hpp"

using namespace uibcost;
using namespace uibcost::ir;

namespace {

const char* kAllMnv4[] = {"mnv4-conv-s", "mnv4-conv-m", "mnv4-conv-l",
                          "mnv4-hybrid-m", "mnv4-hybrid-l"};

}  // namespace

TEST_CASE("stem conv of conv-s maps 224x224x3 to 112x112x32") {
  NetworkSpec net = build_mnv4(Mnv4Variant::ConvS);
  const auto shapes = propagate_shapes(net);
  CHECK(shapes[0].in == TensorShape{224, 224, 3});
  CHECK(shapes[0].out == TensorShape{112, 112, 32});
}

TEST_CASE("stride-1 pointwise conv preserves spatial dims") {
  BlockSpec b{Conv2D{1, 1, 48, true, false, false}};
  CHECK(block_output_shape(b, {31, 17, 48}) == TensorShape{31, 17, 48});
}

TEST_CASE("ExtraDW 5x5/5x5 s2 on 28x28x64 yields 14x14x96") {
  UIB u;
  u.start_dw = 5;
  u.mid_dw = 5;
  u.expanded_c = 192;
  u.out_c = 96;
  u.stride = 2;
  CHECK(block_output_shape({u}, {28, 28, 64}) == TensorShape{14, 14, 96});
}

TEST_CASE("strided blocks use ceiling division on odd extents") {
  UIB u;
  u.mid_dw = 3;
  u.expanded_c = 64;
  u.out_c = 32;
  u.stride = 2;
  CHECK(block_output_shape({u}, {7, 7, 16}) == TensorShape{4, 4, 32});
}

TEST_CASE("channel mismatch reports the offending block index") {
  NetworkSpec net;
  net.input_res = 8;
  net.blocks.push_back({Conv2D{3, 1, 16, true, false, false}});
  BlockSpec bad{Conv2D{3, 1, 8, true, false, false}};
  bad.expected_in_c = 32;  // actual input is 16
  net.blocks.push_back(bad);
  try {
    propagate_shapes(net);
    FAIL("expected ChannelMismatch");
  } catch (const ChannelMismatch& e) {
    CHECK(e.block_index == 1);
  }
}

TEST_CASE("conv-s builder matches the published table structure") {
  NetworkSpec net = build_mnv4(Mnv4Variant::ConvS);
  // 15 compute rows + 4 head rows (1x1 to 960, pool, 1x1 to 1280, classifier)
  CHECK(net.blocks.size() == 19);
  CHECK(net.input_res == 224);
  CHECK(net.blocks[0].is<Conv2D>());
  // the first searchable stage is FusedIB
  CHECK(net.blocks[1].is<FusedIB>());
  CHECK(net.blocks[2].is<FusedIB>());
  CHECK(net.blocks[3].as<UIB>()->kind() == UibKind::ExtraDW);
  CHECK(net.blocks[15].as<Conv2D>()->out_c == 960);
  CHECK(net.blocks[18].as<Dense>()->out_c == 1000);
  CHECK(net.top1_accuracy == 73.8);
}

TEST_CASE("hybrid-m contains exactly 8 mobile-MQA rows") {
  NetworkSpec net = build_mnv4(Mnv4Variant::HybridM);
  int mqa = 0;
  for (const auto& b : net.blocks)
    if (b.is<MobileMQA>()) ++mqa;
  CHECK(mqa == 8);
  // KV downsampling applies at the penultimate (16x16) stage only
  const auto shapes = propagate_shapes(net);
  for (size_t i = 0; i < net.blocks.size(); ++i) {
    if (const auto* m = net.blocks[i].as<MobileMQA>()) {
      if (shapes[i].in.h == 16) CHECK(m->kv_stride == 2);
      if (shapes[i].in.h == 8) CHECK(m->kv_stride == 1);
    }
  }
}

TEST_CASE("conv-l final stage has 13 blocks at 12x12x512") {
  NetworkSpec net = build_mnv4(Mnv4Variant::ConvL);
  const auto shapes = propagate_shapes(net);
  int blocks_at_12 = 0;
  for (size_t i = 0; i < net.blocks.size(); ++i)
    if (net.blocks[i].is<UIB>() &&
        shapes[i].out == TensorShape{12, 12, 512})
      ++blocks_at_12;
  CHECK(blocks_at_12 == 13);
}

TEST_CASE("every built-in reaches the classifier at 1x1x1280") {
  for (const char* name : kAllMnv4) {
    NetworkSpec net = build_by_name(name);
    const auto shapes = propagate_shapes(net);
    CHECK(shapes.back().in == TensorShape{1, 1, 1280});
    CHECK(shapes.back().out == TensorShape{1, 1, 1000});
  }
  for (const char* name : {"mobilenet-v1", "mobilenet-v2", "mobilenet-v3l-0.5x"})
    CHECK_NOTHROW(propagate_shapes(build_by_name(name)));
}

TEST_CASE("UIB variant naming is total and mutually exclusive") {
  const std::optional<int> options[] = {std::nullopt, 3};
  int seen[4] = {0, 0, 0, 0};
  for (auto s : options)
    for (auto m : options) {
      UIB u;
      u.start_dw = s;
      u.mid_dw = m;
      ++seen[int(u.kind())];
    }
  for (int count : seen) CHECK(count == 1);
  UIB ffn;
  CHECK(ffn.kind() == UibKind::FFN);
  UIB ib;
  ib.mid_dw = 5;
  CHECK(ib.kind() == UibKind::IB);
  UIB cnext;
  cnext.start_dw = 3;
  CHECK(cnext.kind() == UibKind::ConvNext);
  UIB extra;
  extra.start_dw = 3;
  extra.mid_dw = 5;
  CHECK(extra.kind() == UibKind::ExtraDW);
}

TEST_CASE("residual flags: stride-1 same-width UIB and MQA only") {
  NetworkSpec net;
  net.input_res = 16;
  net.input_c = 32;
  UIB same;
  same.mid_dw = 3;
  same.expanded_c = 128;
  same.out_c = 32;
  net.blocks.push_back({same});
  net.blocks.push_back({MobileMQA{1, 64, 1}});
  UIB wider = same;
  wider.out_c = 64;
  net.blocks.push_back({wider});
  UIB strided = same;
  strided.out_c = 64;
  strided.stride = 2;
  net.blocks.push_back({strided});
  const auto shapes = propagate_shapes(net);
  CHECK(shapes[0].residual);
  CHECK(shapes[1].residual);
  CHECK_FALSE(shapes[2].residual);
  CHECK_FALSE(shapes[3].residual);
}

TEST_CASE("parse/emit round-trip is the identity on all registry models") {
  for (const std::string& name : registry_names()) {
    NetworkSpec net = build_by_name(name);
    NetworkSpec back = parse_netspec(emit_netspec(net));
    CHECK(back == net);
  }
}

TEST_CASE("even kernels are rejected at parse time") {
  const std::string text = R"({
    "name": "bad", "input_res": 32, "input_c": 3,
    "blocks": [{"kind": "conv2d", "kernel": 4, "stride": 1, "out": 8}]
  })";
  CHECK_THROWS_AS(parse_netspec(text), ParseError);
}

TEST_CASE("hand-written three-block toy net parses and propagates") {
  const std::string text = R"({
    "name": "toy3", "input_res": 16, "input_c": 3,
    "blocks": [
      {"kind": "conv2d", "kernel": 3, "stride": 2, "out": 8},
      {"kind": "uib", "start_dw": 3, "mid_dw": null, "expanded": 32, "out": 8, "stride": 1},
      {"kind": "dense", "out": 10, "bias": true}
    ]
  })";
  NetworkSpec net = parse_netspec(text);
  const auto shapes = propagate_shapes(net);
  // 16 -> 8 at the stem, preserved by the ConvNext-style UIB
  CHECK(shapes[0].out == TensorShape{8, 8, 8});
  CHECK(shapes[1].out == TensorShape{8, 8, 8});
  CHECK(shapes[1].residual);
  CHECK(shapes[2].out == TensorShape{8, 8, 10});
  CHECK(net.blocks[1].as<UIB>()->kind() == UibKind::ConvNext);
}

TEST_CASE("netspec parse failures carry diagnostics") {
  CHECK_THROWS_AS(parse_netspec("{not json"), ParseError);
  // malformed structure: stride 3
  const std::string text = R"({
    "name": "bad", "input_res": 32, "input_c": 3,
    "blocks": [{"kind": "conv2d", "kernel": 3, "stride": 3, "out": 8}]
  })";
  CHECK_THROWS_AS(parse_netspec(text), ValidationError);
  CHECK_THROWS_AS(build_by_name("resnet-50"), UnknownModel);
}

TEST_CASE("depthwise conv2d must preserve channel count") {
  NetworkSpec net;
  net.input_res = 8;
  net.input_c = 16;
  net.blocks.push_back({Conv2D{3, 1, 8, true, false, true}});  // dw with out 8
  CHECK_THROWS_AS(propagate_shapes(net), ChannelMismatch);
}
