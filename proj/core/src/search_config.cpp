// SPDX-License-Identifier: Apache-2.0
#include "uibcost/search_config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace uibcost::search {

using nlohmann::json;

namespace {

std::vector<int> int_list(const json& j) {
  std::vector<int> out;
  for (const auto& v : j) out.push_back(v.get<int>());
  return out;
}

roofline::HardwareTarget target_from_json(const json& j) {
  roofline::HardwareTarget t;
  t.name = j.value("name", "target");
  t.ridge_point = j.at("ridge_point").get<double>();
  t.peak_macs_per_sec = j.value("peak_macs_per_sec", 1e12);
  return t;
}

}  // namespace

SearchConfig parse_search_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, e.what());
  }
  SearchConfig cfg;
  try {
    const json& sp = j.at("space");
    cfg.space.input_res = sp.value("input_res", 224);
    cfg.space.stem_c = sp.value("stem_c", 32);
    cfg.space.stem_fused_expansion = sp.value("stem_fused_expansion", 4);
    cfg.space.stem_fused_out = sp.value("stem_fused_out", 32);
    for (const json& st : sp.at("stages")) {
      StageSpec stage;
      stage.depth_choices = int_list(st.at("depths"));
      stage.filter_choices = int_list(st.at("filters"));
      if (st.contains("dw")) stage.dw_choices = int_list(st.at("dw"));
      if (st.contains("expansions"))
        stage.expansion_choices = int_list(st.at("expansions"));
      cfg.space.stages.push_back(std::move(stage));
    }

    if (j.contains("oracle")) {
      const json& o = j.at("oracle");
      if (o.is_string()) {
        cfg.oracle = o.get<std::string>();
      } else {
        cfg.oracle = o.value("kind", "synthetic");
        cfg.synthetic_params.alpha = o.value("alpha", cfg.synthetic_params.alpha);
        cfg.synthetic_params.gamma = o.value("gamma", cfg.synthetic_params.gamma);
        cfg.synthetic_params.delta = o.value("delta", cfg.synthetic_params.delta);
      }
    }
    if (cfg.oracle != "synthetic" && cfg.oracle != "table")
      throw ParseError(0, "oracle must be 'synthetic' or 'table'");

    const json& rw = j.at("reward");
    cfg.reward.cost_target = rw.at("cost_target").get<double>();
    cfg.reward.beta = rw.value("beta", -1.0);
    const std::string fn = rw.value("cost_fn", "macs");
    if (fn == "macs") {
      cfg.reward.cost_fn = RewardConfig::CostFn::Macs;
    } else if (fn == "roofline") {
      cfg.reward.cost_fn = RewardConfig::CostFn::Roofline;
    } else if (fn == "geo_mean") {
      cfg.reward.cost_fn = RewardConfig::CostFn::GeoMean;
    } else {
      throw ParseError(0, "cost_fn must be macs|roofline|geo_mean");
    }
    if (rw.contains("targets"))
      for (const json& t : rw.at("targets"))
        cfg.reward.targets.push_back(target_from_json(t));

    if (j.contains("budgets")) {
      const json& b = j.at("budgets");
      cfg.coarse_budget = b.value("coarse", cfg.coarse_budget);
      cfg.fine_budget = b.value("fine", cfg.fine_budget);
      cfg.one_stage_budget = b.value("one_stage", cfg.one_stage_budget);
    }
    cfg.seed = j.value("seed", 0);
    cfg.mode = j.value("mode", "two-stage");
    if (cfg.mode != "two-stage" && cfg.mode != "one-stage" &&
        cfg.mode != "coarse")
      throw ParseError(0, "mode must be two-stage|one-stage|coarse");
  } catch (const json::exception& e) {
    throw ParseError(0, e.what());
  }
  if (cfg.space.stages.empty())
    throw ParseError(0, "space.stages must be non-empty");
  if (!(cfg.reward.beta < 0)) throw ParseError(0, "beta must be < 0");
  if (!(cfg.reward.cost_target > 0))
    throw ParseError(0, "cost_target must be > 0");
  return cfg;
}

SearchConfig load_search_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_search_config(ss.str());
}

QualityOracle oracle_from_config(const SearchConfig& cfg) {
  if (cfg.oracle == "table")
    return [](const ir::NetworkSpec& net) { return table_lookup(net.name); };
  return make_synthetic_oracle(cfg.synthetic_params);
}

}  // namespace uibcost::search
