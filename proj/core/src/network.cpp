// SPDX-License-Identifier: Apache-2.0
#include "uibcost/network.hpp"

#include <string>

namespace uibcost::ir {

std::string uib_kind_name(UibKind kind) {
  switch (kind) {
    case UibKind::IB: return "IB";
    case UibKind::ConvNext: return "ConvNext";
    case UibKind::ExtraDW: return "ExtraDW";
    case UibKind::FFN: return "FFN";
  }
  return "?";
}

std::string kind_name(const BlockSpec& block) {
  if (block.is<Conv2D>()) return block.as<Conv2D>()->depthwise ? "conv2d_dw" : "conv2d";
  if (block.is<FusedIB>()) return "fused_ib";
  if (block.is<UIB>()) return "uib/" + uib_kind_name(block.as<UIB>()->kind());
  if (block.is<MobileMQA>()) return "mqa";
  if (block.is<AvgPool>()) return "avgpool";
  return "dense";
}

bool NetworkSpec::operator==(const NetworkSpec& o) const {
  if (name != o.name || input_res != o.input_res || input_c != o.input_c ||
      top1_accuracy != o.top1_accuracy || blocks.size() != o.blocks.size())
    return false;
  for (size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].op != o.blocks[i].op) return false;
    if (blocks[i].expected_in_c != o.blocks[i].expected_in_c) return false;
  }
  return true;
}

TensorShape block_output_shape(const BlockSpec& block, const TensorShape& in) {
  if (const auto* c = block.as<Conv2D>()) {
    int out_c = c->depthwise ? in.c : c->out_c;
    return {ceil_div(in.h, c->stride), ceil_div(in.w, c->stride), out_c};
  }
  if (const auto* f = block.as<FusedIB>()) {
    return {ceil_div(in.h, f->stride), ceil_div(in.w, f->stride), f->out_c};
  }
  if (const auto* u = block.as<UIB>()) {
    return {ceil_div(in.h, u->stride), ceil_div(in.w, u->stride), u->out_c};
  }
  if (block.is<MobileMQA>()) {
    return in;  // shape preserving
  }
  if (block.is<AvgPool>()) {
    return {1, 1, in.c};
  }
  const auto* d = block.as<Dense>();
  return {in.h, in.w, d->out_c};
}

std::vector<BlockShapes> propagate_shapes(const NetworkSpec& net) {
  if (net.blocks.empty()) throw ShapeError("empty network: " + net.name);
  std::vector<BlockShapes> result;
  result.reserve(net.blocks.size());
  TensorShape cur{net.input_res, net.input_res, net.input_c};
  for (size_t i = 0; i < net.blocks.size(); ++i) {
    const BlockSpec& b = net.blocks[i];
    if (b.expected_in_c >= 0 && b.expected_in_c != cur.c)
      throw ChannelMismatch(int(i), b.expected_in_c, cur.c);
    if (const auto* c = b.as<Conv2D>(); c && c->depthwise && c->out_c != 0 &&
                                        c->out_c != cur.c)
      throw ChannelMismatch(int(i), c->out_c, cur.c);
    TensorShape out = block_output_shape(b, cur);
    bool residual = false;
    if (b.is<MobileMQA>()) residual = true;
    if (const auto* u = b.as<UIB>())
      residual = u->stride == 1 && u->out_c == cur.c;
    result.push_back({cur, out, residual});
    cur = out;
  }
  return result;
}

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

}  // namespace

void validate(const NetworkSpec& net) {
  require(net.input_res >= 1 && net.input_c >= 1, "bad input shape");
  for (size_t i = 0; i < net.blocks.size(); ++i) {
    const std::string at = "block " + std::to_string(i) + ": ";
    const BlockSpec& b = net.blocks[i];
    if (const auto* c = b.as<Conv2D>()) {
      require(valid_kernel(c->kernel), at + "kernel must be odd, one of 1/3/5");
      require(c->stride == 1 || c->stride == 2, at + "stride must be 1 or 2");
      require(c->depthwise || c->out_c >= 1, at + "out channels must be >= 1");
    } else if (const auto* f = b.as<FusedIB>()) {
      require(valid_kernel(f->kernel), at + "kernel must be odd, one of 1/3/5");
      require(f->stride == 1 || f->stride == 2, at + "stride must be 1 or 2");
      require(f->expanded_c >= 1 && f->out_c >= 1, at + "channels must be >= 1");
    } else if (const auto* u = b.as<UIB>()) {
      if (u->start_dw) require(valid_kernel(*u->start_dw), at + "start_dw kernel invalid");
      if (u->mid_dw) require(valid_kernel(*u->mid_dw), at + "mid_dw kernel invalid");
      require(u->stride == 1 || u->stride == 2, at + "stride must be 1 or 2");
      require(u->expanded_c >= 1 && u->out_c >= 1, at + "channels must be >= 1");
    } else if (const auto* m = b.as<MobileMQA>()) {
      require(m->num_heads >= 0 && m->head_dim >= 1, at + "bad head config");
      require(m->kv_stride == 1 || m->kv_stride == 2, at + "kv_stride must be 1 or 2");
    } else if (const auto* d = b.as<Dense>()) {
      require(d->out_c >= 1, at + "out features must be >= 1");
    }
  }
  try {
    propagate_shapes(net);
  } catch (const Error& e) {
    throw ValidationError(std::string("shape propagation failed: ") + e.what());
  }
}

}  // namespace uibcost::ir
