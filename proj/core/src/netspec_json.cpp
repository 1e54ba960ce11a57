// SPDX-License-Identifier: Apache-2.0
#include "uibcost/netspec_json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace uibcost::ir {

using nlohmann::json;

namespace {

json block_to_json(const BlockSpec& b) {
  json j;
  if (const auto* c = b.as<Conv2D>()) {
    j["kind"] = "conv2d";
    j["kernel"] = c->kernel;
    j["stride"] = c->stride;
    j["out"] = c->out_c;
    j["bn"] = c->followed_by_bn;
    j["bias"] = c->bias;
    if (c->depthwise) j["depthwise"] = true;
  } else if (const auto* f = b.as<FusedIB>()) {
    j["kind"] = "fused_ib";
    j["kernel"] = f->kernel;
    j["stride"] = f->stride;
    j["expanded"] = f->expanded_c;
    j["out"] = f->out_c;
  } else if (const auto* u = b.as<UIB>()) {
    j["kind"] = "uib";
    j["start_dw"] = u->start_dw ? json(*u->start_dw) : json(nullptr);
    j["mid_dw"] = u->mid_dw ? json(*u->mid_dw) : json(nullptr);
    j["expanded"] = u->expanded_c;
    j["out"] = u->out_c;
    j["stride"] = u->stride;
  } else if (const auto* m = b.as<MobileMQA>()) {
    j["kind"] = "mqa";
    j["num_heads"] = m->num_heads;
    j["head_dim"] = m->head_dim;
    j["kv_stride"] = m->kv_stride;
  } else if (b.is<AvgPool>()) {
    j["kind"] = "avgpool";
  } else if (const auto* d = b.as<Dense>()) {
    j["kind"] = "dense";
    j["out"] = d->out_c;
    j["bias"] = d->bias;
  }
  if (b.expected_in_c >= 0) j["in"] = b.expected_in_c;
  return j;
}

int get_kernel(const json& j, const char* field, size_t index) {
  int k = j.at(field).get<int>();
  if (!valid_kernel(k))
    throw ParseError(int(index),
                     std::string(field) + " kernel must be one of 1/3/5, got " +
                         std::to_string(k));
  return k;
}

BlockSpec block_from_json(const json& j, size_t index) {
  BlockSpec b;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "conv2d") {
    Conv2D c;
    c.kernel = get_kernel(j, "kernel", index);
    c.stride = j.value("stride", 1);
    c.depthwise = j.value("depthwise", false);
    c.out_c = j.value("out", 0);
    c.followed_by_bn = j.value("bn", true);
    c.bias = j.value("bias", false);
    b.op = c;
  } else if (kind == "fused_ib") {
    FusedIB f;
    f.kernel = get_kernel(j, "kernel", index);
    f.stride = j.value("stride", 1);
    f.expanded_c = j.at("expanded").get<int>();
    f.out_c = j.at("out").get<int>();
    b.op = f;
  } else if (kind == "uib") {
    UIB u;
    if (j.contains("start_dw") && !j.at("start_dw").is_null())
      u.start_dw = get_kernel(j, "start_dw", index);
    if (j.contains("mid_dw") && !j.at("mid_dw").is_null())
      u.mid_dw = get_kernel(j, "mid_dw", index);
    u.expanded_c = j.at("expanded").get<int>();
    u.out_c = j.at("out").get<int>();
    u.stride = j.value("stride", 1);
    b.op = u;
  } else if (kind == "mqa") {
    MobileMQA m;
    m.num_heads = j.value("num_heads", 0);
    m.head_dim = j.value("head_dim", 64);
    m.kv_stride = j.value("kv_stride", 1);
    b.op = m;
  } else if (kind == "avgpool") {
    b.op = AvgPool{};
  } else if (kind == "dense") {
    Dense d;
    d.out_c = j.at("out").get<int>();
    d.bias = j.value("bias", true);
    b.op = d;
  } else {
    throw ParseError(int(index), "unknown block kind: " + kind);
  }
  b.expected_in_c = j.value("in", -1);
  return b;
}

}  // namespace

std::string emit_netspec(const NetworkSpec& net) {
  json j;
  j["name"] = net.name;
  j["input_res"] = net.input_res;
  j["input_c"] = net.input_c;
  if (net.top1_accuracy)
    j["top1"] = *net.top1_accuracy;
  else
    j["top1"] = nullptr;
  j["blocks"] = json::array();
  for (const BlockSpec& b : net.blocks) j["blocks"].push_back(block_to_json(b));
  return j.dump(2) + "\n";
}

NetworkSpec parse_netspec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports byte offsets; recover a line number for diagnostics.
    int line = 1;
    for (size_t i = 0; i < std::min(text.size(), size_t(e.byte)); ++i)
      if (text[i] == '\n') ++line;
    throw ParseError(line, e.what());
  }
  NetworkSpec net;
  try {
    net.name = j.value("name", "unnamed");
    net.input_res = j.at("input_res").get<int>();
    net.input_c = j.value("input_c", 3);
    if (j.contains("top1") && !j.at("top1").is_null())
      net.top1_accuracy = j.at("top1").get<double>();
    const json& blocks = j.at("blocks");
    for (size_t i = 0; i < blocks.size(); ++i)
      net.blocks.push_back(block_from_json(blocks[i], i));
  } catch (const json::exception& e) {
    throw ParseError(0, e.what());
  }
  validate(net);  // throws ValidationError (delegates to propagate_shapes)
  return net;
}

NetworkSpec load_netspec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_netspec(ss.str());
}

void save_netspec_file(const NetworkSpec& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << emit_netspec(net);
}

}  // namespace uibcost::ir
