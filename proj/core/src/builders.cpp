// SPDX-License-Identifier: Apache-2.0
#include "uibcost/builders.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <initializer_list>

namespace uibcost::ir {

namespace {

constexpr int kNoDw = 0;

struct Row {
  enum Kind { Conv, Fused, Uib, Mqa } kind;
  int k1 = 0;        // conv/fused kernel, or UIB start dw (0 = absent)
  int k2 = 0;        // UIB mid dw (0 = absent)
  int stride = 1;
  int expanded = 0;  // fused/UIB expanded dim
  int out = 0;
  int heads = 0;     // MQA
  int kv_stride = 1; // MQA
};

Row conv(int k, int s, int out) { return {Row::Conv, k, 0, s, 0, out, 0, 1}; }
Row fused(int k, int s, int e, int out) { return {Row::Fused, k, 0, s, e, out, 0, 1}; }
Row uib(int k1, int k2, int s, int e, int out) { return {Row::Uib, k1, k2, s, e, out, 0, 1}; }
Row mqa(int heads, int kv_stride) { return {Row::Mqa, 0, 0, 1, 0, 0, heads, kv_stride}; }

BlockSpec to_block(const Row& r) {
  BlockSpec b;
  switch (r.kind) {
    case Row::Conv: b.op = Conv2D{r.k1, r.stride, r.out, true, false, false}; break;
    case Row::Fused: b.op = FusedIB{r.k1, r.stride, r.expanded, r.out}; break;
    case Row::Uib: {
      UIB u;
      if (r.k1 != kNoDw) u.start_dw = r.k1;
      if (r.k2 != kNoDw) u.mid_dw = r.k2;
      u.expanded_c = r.expanded;
      u.out_c = r.out;
      u.stride = r.stride;
      b.op = u;
      break;
    }
    case Row::Mqa: b.op = MobileMQA{r.heads, 64, r.kv_stride}; break;
  }
  return b;
}

NetworkSpec assemble(std::string name, int res, std::initializer_list<Row> rows,
                     double top1) {
  NetworkSpec net;
  net.name = std::move(name);
  net.input_res = res;
  net.input_c = 3;
  net.top1_accuracy = top1;
  int in_c = net.input_c;
  for (const Row& r : rows) {
    BlockSpec b = to_block(r);
    b.expected_in_c = in_c;
    net.blocks.push_back(b);
    if (r.kind != Row::Mqa) in_c = r.out;
  }
  append_mobilenet_v3_head(net);
  return net;
}

}  // namespace

// 1x1 conv to 960 (BN), global pool, 1x1 conv to 1280 (bias, no BN),
// classifier to 1000.
void append_mobilenet_v3_head(NetworkSpec& net) {
  net.blocks.push_back({Conv2D{1, 1, 960, true, false, false}});
  net.blocks.push_back({AvgPool{}});
  net.blocks.push_back({Conv2D{1, 1, 1280, false, true, false}});
  net.blocks.push_back({Dense{1000, true}});
}

NetworkSpec build_mnv4(Mnv4Variant variant) {
  switch (variant) {
    case Mnv4Variant::ConvS:
      return assemble("mnv4-conv-s", 224,
          {conv(3, 2, 32),
           fused(3, 2, 32, 32),
           fused(3, 2, 96, 64),
           uib(5, 5, 2, 192, 96),
           uib(kNoDw, 3, 1, 192, 96),
           uib(kNoDw, 3, 1, 192, 96),
           uib(kNoDw, 3, 1, 192, 96),
           uib(kNoDw, 3, 1, 192, 96),
           uib(3, kNoDw, 1, 384, 96),
           uib(3, 3, 2, 576, 128),
           uib(5, 5, 1, 512, 128),
           uib(kNoDw, 5, 1, 512, 128),
           uib(kNoDw, 5, 1, 384, 128),
           uib(kNoDw, 3, 1, 512, 128),
           uib(kNoDw, 3, 1, 512, 128)},
          73.8);
    case Mnv4Variant::ConvM:
      return assemble("mnv4-conv-m", 256,
          {conv(3, 2, 32),
           fused(3, 2, 128, 48),
           uib(3, 5, 2, 192, 80),
           uib(3, 3, 1, 160, 80),
           uib(3, 5, 2, 480, 160),
           uib(3, 3, 1, 640, 160),
           uib(3, 3, 1, 640, 160),
           uib(3, 5, 1, 640, 160),
           uib(3, 3, 1, 640, 160),
           uib(3, kNoDw, 1, 640, 160),
           uib(kNoDw, kNoDw, 1, 320, 160),
           uib(3, kNoDw, 1, 640, 160),
           uib(5, 5, 2, 960, 256),
           uib(5, 5, 1, 1024, 256),
           uib(3, 5, 1, 1024, 256),
           uib(3, 5, 1, 1024, 256),
           uib(kNoDw, kNoDw, 1, 1024, 256),
           uib(3, kNoDw, 1, 1024, 256),
           uib(3, 5, 1, 512, 256),
           uib(5, 5, 1, 1024, 256),
           uib(kNoDw, kNoDw, 1, 1024, 256),
           uib(kNoDw, kNoDw, 1, 1024, 256),
           uib(5, kNoDw, 1, 512, 256)},
          79.9);
    case Mnv4Variant::HybridM:
      // KV downsampling only at the penultimate (16x16) stage; head counts
      // round(c/128) reproduce the published totals (see README notes).
      return assemble("mnv4-hybrid-m", 256,
          {conv(3, 2, 32),
           fused(3, 2, 128, 48),
           uib(3, 5, 2, 192, 80),
           uib(3, 3, 1, 160, 80),
           uib(3, 5, 2, 480, 160),
           uib(3, 3, 1, 640, 160),
           uib(3, 3, 1, 640, 160),
           uib(3, 5, 1, 640, 160),
           mqa(1, 2),
           uib(3, 3, 1, 640, 160),
           mqa(1, 2),
           uib(3, kNoDw, 1, 640, 160),
           mqa(1, 2),
           uib(kNoDw, kNoDw, 1, 640, 160),
           mqa(1, 2),
           uib(3, kNoDw, 1, 640, 160),
           uib(5, 5, 2, 960, 256),
           uib(5, 5, 1, 1024, 256),
           uib(3, 5, 1, 1024, 256),
           uib(3, 5, 1, 1024, 256),
           uib(kNoDw, kNoDw, 1, 1024, 256),
           uib(3, kNoDw, 1, 1024, 256),
           uib(3, 5, 1, 512, 256),
           mqa(2, 1),
           uib(5, 5, 1, 1024, 256),
           mqa(2, 1),
           uib(kNoDw, kNoDw, 1, 1024, 256),
           mqa(2, 1),
           uib(kNoDw, kNoDw, 1, 1024, 256),
           mqa(2, 1),
           uib(5, kNoDw, 1, 1024, 256)},
          80.7);
    case Mnv4Variant::ConvL:
      return assemble("mnv4-conv-l", 384,
          {conv(3, 2, 24),
           fused(3, 2, 96, 48),
           uib(3, 5, 2, 192, 96),
           uib(3, 3, 1, 384, 96),
           uib(3, 5, 2, 384, 192),
           uib(3, 3, 1, 768, 192),
           uib(3, 3, 1, 768, 192),
           uib(3, 3, 1, 768, 192),
           uib(3, 5, 1, 768, 192),
           uib(5, 3, 1, 768, 192),
           uib(5, 3, 1, 768, 192),
           uib(5, 3, 1, 768, 192),
           uib(5, 3, 1, 768, 192),
           uib(5, 3, 1, 768, 192),
           uib(3, kNoDw, 1, 768, 192),
           uib(5, 5, 2, 768, 512),
           uib(5, 5, 1, 2048, 512),
           uib(5, 5, 1, 2048, 512),
           uib(5, 5, 1, 2048, 512),
           uib(5, kNoDw, 1, 2048, 512),
           uib(5, 3, 1, 2048, 512),
           uib(5, kNoDw, 1, 2048, 512),
           uib(5, kNoDw, 1, 2048, 512),
           uib(5, 3, 1, 2048, 512),
           uib(5, 5, 1, 2048, 512),
           uib(5, kNoDw, 1, 2048, 512),
           uib(5, kNoDw, 1, 2048, 512),
           uib(5, kNoDw, 1, 2048, 512)},
          82.9);
    case Mnv4Variant::HybridL:
      return assemble("mnv4-hybrid-l", 384,
          {conv(3, 2, 24),
           fused(3, 2, 96, 48),
           uib(3, 5, 2, 192, 96),
           uib(3, 3, 1, 384, 96),
           uib(3, 5, 2, 384, 192),
           uib(3, 3, 1, 768, 192),
           uib(3, 3, 1, 768, 192),
           uib(3, 3, 1, 768, 192),
           uib(3, 5, 1, 768, 192),
           uib(5, 3, 1, 768, 192),
           uib(5, 3, 1, 768, 192),
           mqa(2, 2),
           uib(5, 3, 1, 768, 192),
           mqa(2, 2),
           uib(5, 3, 1, 768, 192),
           mqa(2, 2),
           uib(5, 3, 1, 768, 192),
           mqa(2, 2),
           uib(3, kNoDw, 1, 768, 192),
           uib(5, 5, 2, 768, 512),
           uib(5, 5, 1, 2048, 512),
           uib(5, 5, 1, 2048, 512),
           uib(5, 5, 1, 2048, 512),
           uib(5, kNoDw, 1, 2048, 512),
           uib(5, 3, 1, 2048, 512),
           uib(5, kNoDw, 1, 2048, 512),
           uib(5, kNoDw, 1, 2048, 512),
           uib(5, 3, 1, 2048, 512),
           uib(5, 5, 1, 2048, 512),
           mqa(4, 1),
           uib(5, kNoDw, 1, 2048, 512),
           mqa(4, 1),
           uib(5, kNoDw, 1, 2048, 512),
           mqa(4, 1),
           uib(5, kNoDw, 1, 2048, 512),
           mqa(4, 1),
           uib(5, kNoDw, 1, 2048, 512)},
          83.4);
  }
  throw UnknownModel("bad mnv4 variant");
}

int make_divisible(double v, int divisor) {
  int new_v = std::max(divisor, (int(v + divisor / 2.0) / divisor) * divisor);
  if (new_v < 0.9 * v) new_v += divisor;
  return new_v;
}

NetworkSpec build_mobilenet_v1(double width, int input_res) {
  auto d = [&](int c) { return make_divisible(c * width); };
  NetworkSpec net;
  net.name = "mobilenet-v1";
  net.input_res = input_res;
  net.blocks.push_back({Conv2D{3, 2, d(32), true, false, false}});
  struct L { int stride, out; };
  const L layers[] = {{1, 64},  {2, 128}, {1, 128}, {2, 256}, {1, 256},
                      {2, 512}, {1, 512}, {1, 512}, {1, 512}, {1, 512},
                      {1, 512}, {2, 1024}, {1, 1024}};
  for (const L& l : layers) {
    net.blocks.push_back({Conv2D{3, l.stride, 0, true, false, true}});
    net.blocks.push_back({Conv2D{1, 1, d(l.out), true, false, false}});
  }
  net.blocks.push_back({AvgPool{}});
  net.blocks.push_back({Dense{1000, true}});
  return net;
}

NetworkSpec build_mobilenet_v2(double width, int input_res) {
  auto d = [&](int c) { return make_divisible(c * width); };
  NetworkSpec net;
  net.name = "mobilenet-v2";
  net.input_res = input_res;
  int in_c = d(32);
  net.blocks.push_back({Conv2D{3, 2, in_c, true, false, false}});
  struct G { int expand_ratio, out, repeat, stride; };
  const G groups[] = {{1, 16, 1, 1},  {6, 24, 2, 2}, {6, 32, 3, 2},
                      {6, 64, 4, 2},  {6, 96, 3, 1}, {6, 160, 3, 2},
                      {6, 320, 1, 1}};
  for (const G& g : groups) {
    for (int i = 0; i < g.repeat; ++i) {
      UIB u;
      u.mid_dw = 3;
      u.expanded_c = g.expand_ratio * in_c;
      u.out_c = d(g.out);
      u.stride = i == 0 ? g.stride : 1;
      net.blocks.push_back({u});
      in_c = u.out_c;
    }
  }
  net.blocks.push_back(
      {Conv2D{1, 1, width > 1.0 ? d(1280) : 1280, true, false, false}});
  net.blocks.push_back({AvgPool{}});
  net.blocks.push_back({Dense{1000, true}});
  return net;
}

NetworkSpec build_mobilenet_v3l(double width, int input_res) {
  auto d = [&](int c) { return make_divisible(c * width); };
  NetworkSpec net;
  net.name = "mobilenet-v3l";
  net.input_res = input_res;
  net.blocks.push_back({Conv2D{3, 2, d(16), true, false, false}});
  struct B { int kernel, expanded, out, stride; };
  const B bnecks[] = {{3, 16, 16, 1},   {3, 64, 24, 2},   {3, 72, 24, 1},
                      {5, 72, 40, 2},   {5, 120, 40, 1},  {5, 120, 40, 1},
                      {3, 240, 80, 2},  {3, 200, 80, 1},  {3, 184, 80, 1},
                      {3, 184, 80, 1},  {3, 480, 112, 1}, {3, 672, 112, 1},
                      {5, 672, 160, 2}, {5, 960, 160, 1}, {5, 960, 160, 1}};
  for (const B& b : bnecks) {
    UIB u;
    u.mid_dw = b.kernel;
    u.expanded_c = d(b.expanded);
    u.out_c = d(b.out);
    u.stride = b.stride;
    net.blocks.push_back({u});
  }
  net.blocks.push_back({Conv2D{1, 1, d(960), true, false, false}});
  net.blocks.push_back({AvgPool{}});
  net.blocks.push_back({Conv2D{1, 1, 1280, false, true, false}});
  net.blocks.push_back({Dense{1000, true}});
  return net;
}

namespace {

// Small fixture for CLI experiments and examples; not a published model.
NetworkSpec build_toy_mini() {
  NetworkSpec net;
  net.name = "toy-mini";
  net.input_res = 32;
  net.blocks.push_back({Conv2D{3, 2, 8, true, false, false}});
  net.blocks.push_back({FusedIB{3, 2, 16, 16}});
  UIB extra;
  extra.start_dw = 3;
  extra.mid_dw = 3;
  extra.expanded_c = 64;
  extra.out_c = 16;
  net.blocks.push_back({extra});
  net.blocks.push_back({MobileMQA{1, 16, 2}});
  UIB ffn;
  ffn.expanded_c = 64;
  ffn.out_c = 16;
  net.blocks.push_back({ffn});
  net.blocks.push_back({AvgPool{}});
  net.blocks.push_back({Dense{10, true}});
  return net;
}

std::string canonical(const std::string& name) {
  std::string s;
  for (char c : name) s += char(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

NetworkSpec with_name(NetworkSpec net, const std::string& name) {
  net.name = name;
  return net;
}

}  // namespace

NetworkSpec build_by_name(const std::string& name) {
  const std::string c = canonical(name);
  if (c == "mnv4-conv-s") return with_name(build_mnv4(Mnv4Variant::ConvS), name);
  if (c == "mnv4-conv-m") return with_name(build_mnv4(Mnv4Variant::ConvM), name);
  if (c == "mnv4-conv-l") return with_name(build_mnv4(Mnv4Variant::ConvL), name);
  if (c == "mnv4-hybrid-m") return with_name(build_mnv4(Mnv4Variant::HybridM), name);
  if (c == "mnv4-hybrid-l") return with_name(build_mnv4(Mnv4Variant::HybridL), name);
  if (c == "mobilenet-v1") return with_name(build_mobilenet_v1(1.0), name);
  if (c == "mobilenet-v2") return with_name(build_mobilenet_v2(1.0), name);
  if (c == "mobilenet-v2-0.5x") return with_name(build_mobilenet_v2(0.5), name);
  if (c == "mobilenet-v2-1.5x") return with_name(build_mobilenet_v2(1.5), name);
  if (c == "mobilenet-v2-2.0x") return with_name(build_mobilenet_v2(2.0), name);
  if (c == "mobilenet-v3l-0.5x") return with_name(build_mobilenet_v3l(0.5), name);
  if (c == "toy-mini") return build_toy_mini();
  throw UnknownModel("unknown model: " + name);
}

bool is_known_model(const std::string& name) {
  try {
    build_by_name(name);
    return true;
  } catch (const UnknownModel&) {
    return false;
  }
}

std::vector<std::string> registry_names() {
  return {"mnv4-conv-s",  "mnv4-conv-m",       "mnv4-conv-l",
          "mnv4-hybrid-m", "mnv4-hybrid-l",    "mobilenet-v1",
          "mobilenet-v2",  "mobilenet-v2-0.5x", "mobilenet-v2-1.5x",
          "mobilenet-v2-2.0x", "mobilenet-v3l-0.5x", "toy-mini"};
}

}  // namespace uibcost::ir
