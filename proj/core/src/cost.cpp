// SPDX-License-Identifier: Apache-2.0
#include "uibcost/cost.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace uibcost::cost {

using namespace ir;

namespace {

using u64 = std::uint64_t;

struct Acc {
  u64 macs = 0;
  u64 params = 0;

  // conv followed by BN: no bias, 2 affine params per channel, 0 MACs
  void conv(u64 positions, int k, int cin, int cout, bool bn, bool bias) {
    macs += positions * u64(k) * k * cin * cout;
    params += u64(k) * k * cin * cout;
    if (bn) params += 2 * u64(cout);
    if (bias) params += u64(cout);
  }
  void dwconv(u64 positions, int k, int c, bool bn = true) {
    macs += positions * u64(k) * k * c;
    params += u64(k) * k * c;
    if (bn) params += 2 * u64(c);
  }
};

u64 positions(int h, int w) { return u64(h) * w; }

}  // namespace

BlockCost& BlockCost::operator+=(const BlockCost& o) {
  macs += o.macs;
  params += o.params;
  weight_bytes += o.weight_bytes;
  act_in_bytes += o.act_in_bytes;
  act_out_bytes += o.act_out_bytes;
  return *this;
}

BlockCost block_cost(const BlockSpec& block, const TensorShape& in,
                     DtypeWidths dtype) {
  const TensorShape out = block_output_shape(block, in);
  Acc a;
  if (const auto* c = block.as<Conv2D>()) {
    if (c->depthwise)
      a.dwconv(positions(out.h, out.w), c->kernel, in.c, c->followed_by_bn);
    else
      a.conv(positions(out.h, out.w), c->kernel, in.c, c->out_c,
             c->followed_by_bn, c->bias);
  } else if (const auto* f = block.as<FusedIB>()) {
    a.conv(positions(out.h, out.w), f->kernel, in.c, f->expanded_c, true, false);
    a.conv(positions(out.h, out.w), 1, f->expanded_c, f->out_c, true, false);
  } else if (const auto* u = block.as<UIB>()) {
    // stride lands on the mid DW when present, else on the start DW, else on
    // the projection; everything upstream of the striding conv runs at input
    // resolution
    int eh = in.h, ew = in.w;
    if (u->start_dw) {
      const bool strides_here = u->stride > 1 && !u->mid_dw;
      if (strides_here) { eh = out.h; ew = out.w; }
      a.dwconv(positions(eh, ew), *u->start_dw, in.c);
    }
    a.conv(positions(eh, ew), 1, in.c, u->expanded_c, true, false);
    if (u->mid_dw) a.dwconv(positions(out.h, out.w), *u->mid_dw, u->expanded_c);
    a.conv(positions(out.h, out.w), 1, u->expanded_c, u->out_c, true, false);
  } else if (const auto* m = block.as<MobileMQA>()) {
    const int c = in.c;
    const int heads = m->heads_for(c);
    const int d = m->head_dim;
    const u64 n = positions(in.h, in.w);
    const u64 tokens_kv =
        positions(ceil_div(in.h, m->kv_stride), ceil_div(in.w, m->kv_stride));
    if (m->kv_stride > 1) a.dwconv(tokens_kv, 3, c);  // shared K/V reduction
    a.macs += n * c * u64(heads) * d;        // Q projection
    a.macs += tokens_kv * c * u64(d) * 2;    // shared K and V
    a.macs += n * u64(heads) * d * c;        // output projection
    a.macs += 2 * u64(heads) * n * tokens_kv * d;  // logits + weighted sum
    a.params += u64(c) * heads * d * 2;      // Q and O weights
    a.params += u64(c) * d * 2;              // K and V weights
  } else if (block.is<Dense>()) {
    const auto* dn = block.as<Dense>();
    a.conv(positions(in.h, in.w), 1, in.c, dn->out_c, false, dn->bias);
  }
  // AvgPool: no MACs, no params

  BlockCost bc;
  bc.macs = a.macs;
  bc.params = a.params;
  bc.weight_bytes = a.params * u64(dtype.weight_bytes);
  bc.act_in_bytes = u64(in.elems()) * dtype.activation_bytes;
  bc.act_out_bytes = u64(out.elems()) * dtype.activation_bytes;
  return bc;
}

CostReport network_cost(const NetworkSpec& net, DtypeWidths dtype) {
  const auto shapes = propagate_shapes(net);
  CostReport r;
  r.model = net.name;
  r.dtype = dtype;
  r.per_block.reserve(net.blocks.size());
  for (size_t i = 0; i < net.blocks.size(); ++i) {
    BlockCost bc = block_cost(net.blocks[i], shapes[i].in, dtype);
    r.block_kinds.push_back(kind_name(net.blocks[i]));
    r.total_macs += bc.macs;
    r.total_params += bc.params;
    r.total_bytes += bc.total_bytes();
    r.per_block.push_back(bc);
  }
  return r;
}

namespace {

// Stage boundaries: the searchable stages start at each stride-2 block past
// the stem; the head (final 1x1 conv / pool / classifier) is excluded.
size_t stage_end_index(const NetworkSpec& net, int stage) {
  std::vector<size_t> starts;  // index of each stride-2 block
  size_t head_start = net.blocks.size();
  for (size_t i = 0; i < net.blocks.size(); ++i) {
    const BlockSpec& b = net.blocks[i];
    int stride = 1;
    if (const auto* c = b.as<Conv2D>()) stride = c->stride;
    if (const auto* f = b.as<FusedIB>()) stride = f->stride;
    if (const auto* u = b.as<UIB>()) stride = u->stride;
    if (stride == 2) starts.push_back(i);
    if (b.is<AvgPool>()) { head_start = i > 0 ? i - 1 : 0; break; }
  }
  if (starts.empty()) throw Error("network has no stages");
  const int n_stages = int(starts.size());
  int idx = stage < 0 ? n_stages + stage : stage;
  if (idx < 0 || idx >= n_stages)
    throw Error("stage index out of range: " + std::to_string(stage));
  return idx + 1 < n_stages ? starts[idx + 1] : head_start;
}

}  // namespace

AttentionDelta attention_delta(const NetworkSpec& base, AttentionVariant variant,
                               int count, int stage, DtypeWidths dtype) {
  AttentionDelta delta;
  delta.base = network_cost(base, dtype);
  const size_t insert_at = stage_end_index(base, stage);
  const auto shapes = propagate_shapes(base);
  const TensorShape at = shapes[insert_at].in;  // running shape at insertion
  const int d = at.c;
  const int head_dim = 64;
  const int heads = std::max(1, d / head_dim);

  CostReport with = delta.base;
  for (int i = 0; i < count; ++i) {
    BlockCost bc;
    if (variant == AttentionVariant::MQA) {
      BlockSpec b;
      b.op = MobileMQA{heads, head_dim, 1};
      bc = block_cost(b, at, dtype);
      with.block_kinds.push_back("mqa");
    } else {
      // MHSA: Q/K/V/O all d x d, per-head K/V; logits and weighted sum over
      // full-resolution keys
      const u64 n = u64(at.h) * at.w;
      bc.macs = 4 * n * u64(d) * d + 2 * u64(heads) * n * n * head_dim;
      bc.params = 4 * u64(d) * d;
      bc.weight_bytes = bc.params * u64(dtype.weight_bytes);
      bc.act_in_bytes = u64(at.elems()) * dtype.activation_bytes;
      bc.act_out_bytes = u64(at.elems()) * dtype.activation_bytes;
      with.block_kinds.push_back("mhsa");
    }
    with.per_block.push_back(bc);
    with.total_macs += bc.macs;
    with.total_params += bc.params;
    with.total_bytes += bc.total_bytes();
    delta.attention_macs += bc.macs;
    delta.attention_params += bc.params;
  }
  delta.with_attention = std::move(with);
  return delta;
}

double kv_downsample_delta(const NetworkSpec& net, DtypeWidths dtype) {
  bool has_mqa = false;
  NetworkSpec flat = net;
  for (BlockSpec& b : flat.blocks) {
    if (auto* m = std::get_if<MobileMQA>(&b.op)) {
      has_mqa = true;
      m->kv_stride = 1;
    }
  }
  if (!has_mqa) throw Error("kv_downsample_delta: network has no MQA block");
  const double with_ds = double(network_cost(net, dtype).total_macs);
  const double without_ds = double(network_cost(flat, dtype).total_macs);
  return (with_ds - without_ds) / without_ds;
}

std::string to_csv(const CostReport& report) {
  std::ostringstream os;
  os << "index,kind,macs,params,bytes,op_intensity\n";
  for (size_t i = 0; i < report.per_block.size(); ++i) {
    const BlockCost& b = report.per_block[i];
    os << i << ',' << report.block_kinds[i] << ',' << b.macs << ',' << b.params
       << ',' << b.total_bytes() << ',' << b.op_intensity() << '\n';
  }
  os << "total,," << report.total_macs << ',' << report.total_params << ','
     << report.total_bytes << ',' << report.op_intensity() << '\n';
  return os.str();
}

std::string to_json(const CostReport& report) {
  nlohmann::json j;
  j["model"] = report.model;
  j["dtype"] = {{"weights", report.dtype.weight_bytes},
                {"activations", report.dtype.activation_bytes}};
  j["total"] = {{"macs", report.total_macs},
                {"params", report.total_params},
                {"bytes", report.total_bytes},
                {"op_intensity", report.op_intensity()}};
  j["blocks"] = nlohmann::json::array();
  for (size_t i = 0; i < report.per_block.size(); ++i) {
    const BlockCost& b = report.per_block[i];
    j["blocks"].push_back({{"index", i},
                           {"kind", report.block_kinds[i]},
                           {"macs", b.macs},
                           {"params", b.params},
                           {"bytes", b.total_bytes()},
                           {"op_intensity", b.op_intensity()}});
  }
  return j.dump(2) + "\n";
}

}  // namespace uibcost::cost
