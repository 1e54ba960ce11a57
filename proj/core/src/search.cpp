// SPDX-License-Identifier: Apache-2.0
#include "uibcost/search.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_map>

#include "uibcost/builders.hpp"
#include "uibcost/metrics.hpp"

namespace uibcost::search {

using namespace ir;

int StageSpec::max_depth() const {
  if (depth_choices.empty()) return 0;
  return *std::max_element(depth_choices.begin(), depth_choices.end());
}

double SearchSpace::size() const {
  double total = 1.0;
  for (const StageSpec& st : stages) {
    const double per_block =
        double(st.dw_choices.size()) * st.dw_choices.size() *
        st.expansion_choices.size();
    double stage_total = 0.0;
    for (int d : st.depth_choices)
      stage_total += double(st.filter_choices.size()) * std::pow(per_block, d);
    total *= stage_total;
  }
  return total;
}

std::uint64_t Candidate::hash() const {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  auto mix = [&h](int v) {
    h ^= std::uint64_t(std::uint32_t(v));
    h *= 1099511628211ULL;
  };
  for (int v : depth_idx) mix(v);
  for (int v : filter_idx) mix(v);
  for (const auto& s : start_dw_idx) for (int v : s) mix(v);
  for (const auto& s : mid_dw_idx) for (int v : s) mix(v);
  for (const auto& s : expansion_idx) for (int v : s) mix(v);
  return h;
}

namespace {

void check_space(const SearchSpace& space) {
  if (space.stages.empty()) throw EmptySpace("search space has no stages");
  for (const StageSpec& st : space.stages) {
    if (st.depth_choices.empty() || st.filter_choices.empty() ||
        st.dw_choices.empty() || st.expansion_choices.empty())
      throw EmptySpace("stage with an empty choice set");
  }
}

int index_of_value(const std::vector<int>& choices, int wanted) {
  for (size_t i = 0; i < choices.size(); ++i)
    if (choices[i] == wanted) return int(i);
  return 0;  // pin to the first choice when the preferred value is absent
}

// Slots at or past the active depth are reset to zero so equal
// configurations hash equally.
void canonicalize(const SearchSpace& space, Candidate& c) {
  for (size_t s = 0; s < space.stages.size(); ++s) {
    const int depth = space.stages[s].depth_choices[size_t(c.depth_idx[s])];
    for (size_t i = size_t(depth); i < c.start_dw_idx[s].size(); ++i) {
      c.start_dw_idx[s][i] = 0;
      c.mid_dw_idx[s][i] = 0;
      c.expansion_idx[s][i] = 0;
    }
  }
}

Candidate empty_candidate(const SearchSpace& space) {
  Candidate c;
  const size_t n = space.stages.size();
  c.depth_idx.assign(n, 0);
  c.filter_idx.assign(n, 0);
  c.start_dw_idx.resize(n);
  c.mid_dw_idx.resize(n);
  c.expansion_idx.resize(n);
  for (size_t s = 0; s < n; ++s) {
    const size_t slots = size_t(space.stages[s].max_depth());
    c.start_dw_idx[s].assign(slots, 0);
    c.mid_dw_idx[s].assign(slots, 0);
    c.expansion_idx[s].assign(slots, 0);
  }
  return c;
}

// Coarse phase pins every UIB to IB: no start DW, 3x3 mid DW, expansion 4.
void pin_to_ib(const SearchSpace& space, Candidate& c) {
  for (size_t s = 0; s < space.stages.size(); ++s) {
    const StageSpec& st = space.stages[s];
    const int none_idx = index_of_value(st.dw_choices, 0);
    const int k3_idx = index_of_value(st.dw_choices, 3);
    const int e4_idx = index_of_value(st.expansion_choices, 4);
    for (size_t i = 0; i < c.start_dw_idx[s].size(); ++i) {
      c.start_dw_idx[s][i] = none_idx;
      c.mid_dw_idx[s][i] = k3_idx;
      c.expansion_idx[s][i] = e4_idx;
    }
  }
  canonicalize(space, c);
}

}  // namespace

NetworkSpec realize(const SearchSpace& space, const Candidate& cand) {
  check_space(space);
  NetworkSpec net;
  net.name = "candidate-" + std::to_string(cand.hash());
  net.input_res = space.input_res;
  net.blocks.push_back({Conv2D{3, 2, space.stem_c, true, false, false}});
  net.blocks.push_back({FusedIB{3, 2, space.stem_c * space.stem_fused_expansion,
                                space.stem_fused_out}});
  int in_c = space.stem_fused_out;
  for (size_t s = 0; s < space.stages.size(); ++s) {
    const StageSpec& st = space.stages[s];
    const int depth = st.depth_choices[size_t(cand.depth_idx[s])];
    const int filters = st.filter_choices[size_t(cand.filter_idx[s])];
    for (int i = 0; i < depth; ++i) {
      UIB u;
      const int start_k = st.dw_choices[size_t(cand.start_dw_idx[s][size_t(i)])];
      const int mid_k = st.dw_choices[size_t(cand.mid_dw_idx[s][size_t(i)])];
      if (start_k != 0) u.start_dw = start_k;
      if (mid_k != 0) u.mid_dw = mid_k;
      u.expanded_c =
          st.expansion_choices[size_t(cand.expansion_idx[s][size_t(i)])] * in_c;
      u.out_c = filters;
      u.stride = i == 0 ? 2 : 1;
      net.blocks.push_back({u});
      in_c = filters;
    }
  }
  append_mobilenet_v3_head(net);
  return net;
}

double reward(double quality, double cost, const RewardConfig& cfg) {
  if (!(cfg.beta < 0)) throw Error("reward: beta must be < 0");
  if (!(cfg.cost_target > 0)) throw Error("reward: cost_target must be > 0");
  if (!(cost > 0)) throw Error("reward: cost must be > 0");
  return quality + cfg.beta * std::abs(cost / cfg.cost_target - 1.0);
}

double candidate_cost(const cost::CostReport& report, const RewardConfig& cfg) {
  switch (cfg.cost_fn) {
    case RewardConfig::CostFn::Macs:
      return double(report.total_macs);
    case RewardConfig::CostFn::Roofline: {
      if (cfg.targets.empty()) throw Error("roofline cost needs a target");
      return roofline::predict_latency(report, cfg.targets[0]).total_s;
    }
    case RewardConfig::CostFn::GeoMean: {
      if (cfg.targets.empty()) throw Error("geo_mean cost needs targets");
      std::vector<double> lats;
      lats.reserve(cfg.targets.size());
      for (const auto& t : cfg.targets)
        lats.push_back(roofline::predict_latency(report, t).total_s);
      return metrics::geo_mean(lats);
    }
  }
  throw Error("bad cost_fn");
}

double synthetic_capacity(const NetworkSpec& net,
                          const SyntheticCapacityParams& p) {
  const cost::CostReport r = cost::network_cost(net);
  int with_dw = 0;
  for (const BlockSpec& b : net.blocks) {
    if (const auto* u = b.as<UIB>()) {
      if (u->start_dw || u->mid_dw) ++with_dw;
    } else if (const auto* c = b.as<Conv2D>()) {
      if (c->depthwise) ++with_dw;
    }
  }
  const double frac = net.blocks.empty() ? 0.0
                                         : double(with_dw) / double(net.blocks.size());
  return p.alpha * std::log(double(r.total_params)) +
         p.gamma * std::log(double(r.total_macs)) + p.delta * frac;
}

QualityOracle make_synthetic_oracle(SyntheticCapacityParams params) {
  return [params](const NetworkSpec& net) {
    return synthetic_capacity(net, params);
  };
}

double table_lookup(const std::string& model_name) {
  static const std::unordered_map<std::string, double> kTop1 = {
      {"mnv4-conv-s", 73.8},      {"mnv4-conv-m", 79.9},
      {"mnv4-conv-l", 82.9},      {"mnv4-hybrid-m", 80.7},
      {"mnv4-hybrid-l", 83.4},    {"mobilenet-v1", 74.0},
      {"mobilenet-v2", 73.4},     {"mobilenet-v2-0.5x", 66.0},
      {"mobilenet-v2-1.5x", 76.8},{"mobilenet-v2-2.0x", 78.4},
      {"mobilenet-v3l-0.5x", 69.2},
  };
  std::string c;
  for (char ch : model_name) c += char(std::tolower(static_cast<unsigned char>(ch)));
  auto it = kTop1.find(c);
  if (it == kTop1.end()) throw UnknownModel("no published top-1 for " + model_name);
  return it->second;
}

namespace {

struct GeneRef {
  enum Kind { Depth, Filter, StartDw, MidDw, Expansion } kind;
  size_t stage;
  size_t slot;
};

// Genes that the phase may change. Slot genes cover only the currently
// active depth of each stage.
std::vector<GeneRef> active_genes(const SearchSpace& space, const Candidate& c,
                                  SearchPhase phase) {
  std::vector<GeneRef> genes;
  for (size_t s = 0; s < space.stages.size(); ++s) {
    const StageSpec& st = space.stages[s];
    const bool structural = phase != SearchPhase::Fine;
    if (structural) {
      if (st.depth_choices.size() > 1) genes.push_back({GeneRef::Depth, s, 0});
      if (st.filter_choices.size() > 1) genes.push_back({GeneRef::Filter, s, 0});
    }
    if (phase != SearchPhase::Coarse) {
      const int depth = st.depth_choices[size_t(c.depth_idx[s])];
      for (size_t i = 0; i < size_t(depth); ++i) {
        if (st.dw_choices.size() > 1) {
          genes.push_back({GeneRef::StartDw, s, i});
          genes.push_back({GeneRef::MidDw, s, i});
        }
        if (st.expansion_choices.size() > 1)
          genes.push_back({GeneRef::Expansion, s, i});
      }
    }
  }
  return genes;
}

size_t gene_domain(const SearchSpace& space, const GeneRef& g) {
  const StageSpec& st = space.stages[g.stage];
  switch (g.kind) {
    case GeneRef::Depth: return st.depth_choices.size();
    case GeneRef::Filter: return st.filter_choices.size();
    case GeneRef::StartDw:
    case GeneRef::MidDw: return st.dw_choices.size();
    case GeneRef::Expansion: return st.expansion_choices.size();
  }
  return 1;
}

int& gene_value(Candidate& c, const GeneRef& g) {
  switch (g.kind) {
    case GeneRef::Depth: return c.depth_idx[g.stage];
    case GeneRef::Filter: return c.filter_idx[g.stage];
    case GeneRef::StartDw: return c.start_dw_idx[g.stage][g.slot];
    case GeneRef::MidDw: return c.mid_dw_idx[g.stage][g.slot];
    case GeneRef::Expansion: return c.expansion_idx[g.stage][g.slot];
  }
  return c.depth_idx[0];
}

struct Searcher {
  const SearchSpace& space;
  const QualityOracle& oracle;
  const RewardConfig& cfg;
  SearchPhase phase;
  std::uint64_t budget;
  std::mt19937_64 rng;
  std::optional<Candidate> frozen;  // fine phase: structure to keep

  std::unordered_map<std::uint64_t, double> reward_cache;
  SearchResult result;
  int generation = 0;

  static constexpr int kPopulation = 32;
  static constexpr int kTournament = 4;

  Searcher(const SearchSpace& sp, const QualityOracle& orc,
           const RewardConfig& rc, SearchPhase ph, std::uint64_t b,
           std::uint64_t seed)
      : space(sp), oracle(orc), cfg(rc), phase(ph), budget(b), rng(seed) {}

  Candidate normalize(Candidate c) {
    if (phase == SearchPhase::Coarse) pin_to_ib(space, c);
    canonicalize(space, c);
    return c;
  }

  Candidate random_candidate() {
    Candidate c = frozen ? *frozen : empty_candidate(space);
    if (!frozen) {
      for (size_t s = 0; s < space.stages.size(); ++s) {
        const StageSpec& st = space.stages[s];
        c.depth_idx[s] = int(rng() % st.depth_choices.size());
        c.filter_idx[s] = int(rng() % st.filter_choices.size());
      }
    }
    if (phase != SearchPhase::Coarse) {
      for (size_t s = 0; s < space.stages.size(); ++s) {
        const StageSpec& st = space.stages[s];
        const int depth = st.depth_choices[size_t(c.depth_idx[s])];
        for (int i = 0; i < depth; ++i) {
          c.start_dw_idx[s][size_t(i)] = int(rng() % st.dw_choices.size());
          c.mid_dw_idx[s][size_t(i)] = int(rng() % st.dw_choices.size());
          c.expansion_idx[s][size_t(i)] = int(rng() % st.expansion_choices.size());
        }
      }
    }
    return normalize(c);
  }

  Candidate mutate(const Candidate& parent) {
    Candidate c = parent;
    const auto genes = active_genes(space, c, phase);
    if (genes.empty()) return normalize(c);
    const GeneRef g = genes[rng() % genes.size()];
    const size_t domain = gene_domain(space, g);
    int& v = gene_value(c, g);
    const int old_depth =
        g.kind == GeneRef::Depth
            ? space.stages[g.stage].depth_choices[size_t(v)] : 0;
    v = int(rng() % domain);
    if (g.kind == GeneRef::Depth && phase != SearchPhase::Coarse) {
      // newly activated slots get fresh genes instead of canonical zeros
      const StageSpec& st = space.stages[g.stage];
      const int new_depth = st.depth_choices[size_t(v)];
      for (int i = old_depth; i < new_depth; ++i) {
        c.start_dw_idx[g.stage][size_t(i)] = int(rng() % st.dw_choices.size());
        c.mid_dw_idx[g.stage][size_t(i)] = int(rng() % st.dw_choices.size());
        c.expansion_idx[g.stage][size_t(i)] =
            int(rng() % st.expansion_choices.size());
      }
    }
    return normalize(c);
  }

  double evaluate(const Candidate& c) {
    const std::uint64_t h = c.hash();
    auto it = reward_cache.find(h);
    if (it != reward_cache.end()) return it->second;
    const NetworkSpec net = realize(space, c);
    const cost::CostReport report = cost::network_cost(net);
    const double quality = oracle(net);
    const double c_cost = candidate_cost(report, cfg);
    const double r = reward(quality, c_cost, cfg);
    reward_cache.emplace(h, r);
    result.log.push_back({h, quality, c_cost, r, generation});
    ++result.evaluations;
    if (result.evaluations == 1 || r > result.best_reward) {
      result.best = c;
      result.best_reward = r;
      result.best_quality = quality;
      result.best_cost = c_cost;
    }
    return r;
  }

  // depth-first enumeration of the phase's whole space, canonical order
  void enumerate_all() {
    Candidate c = frozen ? *frozen : empty_candidate(space);
    if (phase == SearchPhase::Coarse) pin_to_ib(space, c);
    enum_structure(c, 0);
  }

  void enum_structure(Candidate& c, size_t stage) {
    if (stage == space.stages.size()) {
      if (phase == SearchPhase::Coarse) {
        Candidate n = normalize(c);
        evaluate(n);
      } else {
        enum_slots(c, 0, 0);
      }
      return;
    }
    if (frozen) {
      enum_structure(c, stage + 1);
      return;
    }
    const StageSpec& st = space.stages[stage];
    for (size_t d = 0; d < st.depth_choices.size(); ++d) {
      c.depth_idx[stage] = int(d);
      for (size_t f = 0; f < st.filter_choices.size(); ++f) {
        c.filter_idx[stage] = int(f);
        enum_structure(c, stage + 1);
      }
    }
  }

  void enum_slots(Candidate& c, size_t stage, size_t slot) {
    if (stage == space.stages.size()) {
      Candidate n = normalize(c);
      evaluate(n);
      return;
    }
    const StageSpec& st = space.stages[stage];
    const size_t depth = size_t(st.depth_choices[size_t(c.depth_idx[stage])]);
    if (slot >= depth) {
      enum_slots(c, stage + 1, 0);
      return;
    }
    for (size_t a = 0; a < st.dw_choices.size(); ++a) {
      c.start_dw_idx[stage][slot] = int(a);
      for (size_t b = 0; b < st.dw_choices.size(); ++b) {
        c.mid_dw_idx[stage][slot] = int(b);
        for (size_t e = 0; e < st.expansion_choices.size(); ++e) {
          c.expansion_idx[stage][slot] = int(e);
          enum_slots(c, stage, slot + 1);
        }
      }
    }
  }

  double phase_space_size() const {
    double total = 1.0;
    for (size_t s = 0; s < space.stages.size(); ++s) {
      const StageSpec& st = space.stages[s];
      const double per_block = double(st.dw_choices.size()) *
                               st.dw_choices.size() *
                               st.expansion_choices.size();
      if (phase == SearchPhase::Coarse) {
        total *= double(st.depth_choices.size()) * st.filter_choices.size();
      } else if (phase == SearchPhase::Fine) {
        const int depth =
            space.stages[s].depth_choices[size_t((*frozen).depth_idx[s])];
        total *= std::pow(per_block, depth);
      } else {
        double stage_total = 0.0;
        for (int d : st.depth_choices)
          stage_total += double(st.filter_choices.size()) * std::pow(per_block, d);
        total *= stage_total;
      }
      if (total > 1e18) return 1e18;
    }
    return total;
  }

  SearchResult run() {
    check_space(space);
    if (budget < 1) throw Error("budget must be >= 1");
    if (phase_space_size() <= double(budget)) {
      enumerate_all();
      finish();
      return std::move(result);
    }
    // evolutionary loop: population of 32, tournament of 4, one-gene mutation
    std::vector<std::pair<Candidate, double>> pop;
    if (frozen) {
      // the frozen structure with its phase-pinned genes stays reachable
      Candidate c = normalize(*frozen);
      pop.emplace_back(c, evaluate(c));
    }
    std::uint64_t stale_draws = 0;
    while (result.evaluations < budget && int(pop.size()) < kPopulation &&
           stale_draws < 64 * kPopulation) {
      Candidate c = random_candidate();
      const std::uint64_t before = result.evaluations;
      const double r = evaluate(c);
      if (result.evaluations == before) { ++stale_draws; continue; }
      pop.emplace_back(std::move(c), r);
    }
    while (result.evaluations < budget && !pop.empty()) {
      ++generation;
      std::vector<std::pair<Candidate, double>> children;
      for (int k = 0; k < kPopulation && result.evaluations < budget; ++k) {
        const auto& parent = tournament(pop);
        Candidate child = mutate(parent.first);
        const std::uint64_t before = result.evaluations;
        const double r = evaluate(child);
        if (result.evaluations > before)
          children.emplace_back(std::move(child), r);
      }
      if (children.empty()) {
        // mutation space exhausted around this population; random restart
        Candidate c = random_candidate();
        const std::uint64_t before = result.evaluations;
        const double r = evaluate(c);
        if (result.evaluations == before) break;
        children.emplace_back(std::move(c), r);
      }
      for (auto& ch : children) pop.push_back(std::move(ch));
      std::stable_sort(pop.begin(), pop.end(),
                       [](const auto& a, const auto& b) {
                         if (a.second != b.second) return a.second > b.second;
                         return a.first.hash() < b.first.hash();
                       });
      if (int(pop.size()) > kPopulation) pop.resize(size_t(kPopulation));
    }
    finish();
    return std::move(result);
  }

  const std::pair<Candidate, double>& tournament(
      const std::vector<std::pair<Candidate, double>>& pop) {
    const std::pair<Candidate, double>* best = nullptr;
    for (int i = 0; i < kTournament; ++i) {
      const auto& c = pop[rng() % pop.size()];
      if (!best || c.second > best->second) best = &c;
    }
    return *best;
  }

  void finish() {
    if (result.evaluations == 0) throw EmptySpace("no candidate evaluated");
    result.best_net = realize(space, result.best);
  }
};

}  // namespace

SearchResult coarse_search(const SearchSpace& space, const QualityOracle& oracle,
                           const RewardConfig& cfg, std::uint64_t budget,
                           std::uint64_t seed) {
  Searcher s(space, oracle, cfg, SearchPhase::Coarse, budget, seed);
  return s.run();
}

SearchResult fine_search(const SearchSpace& space, const Candidate& frozen,
                         const QualityOracle& oracle, const RewardConfig& cfg,
                         std::uint64_t budget, std::uint64_t seed) {
  Searcher s(space, oracle, cfg, SearchPhase::Fine, budget, seed);
  s.frozen = frozen;
  return s.run();
}

SearchResult one_stage_search(const SearchSpace& space,
                              const QualityOracle& oracle,
                              const RewardConfig& cfg, std::uint64_t budget,
                              std::uint64_t seed) {
  Searcher s(space, oracle, cfg, SearchPhase::OneStage, budget, seed);
  return s.run();
}

TwoStageResult two_stage_search(const SearchSpace& space,
                                const QualityOracle& oracle,
                                const RewardConfig& cfg,
                                std::uint64_t coarse_budget,
                                std::uint64_t fine_budget, std::uint64_t seed) {
  TwoStageResult r;
  r.coarse = coarse_search(space, oracle, cfg, coarse_budget, seed);
  r.fine = fine_search(space, r.coarse.best, oracle, cfg, fine_budget, seed + 1);
  return r;
}

std::string eval_log_to_csv(const std::vector<EvalRecord>& log) {
  std::ostringstream os;
  os << "candidate_hash,quality,cost,reward,generation\n";
  for (const EvalRecord& r : log)
    os << r.candidate_hash << ',' << r.quality << ',' << r.cost << ','
       << r.reward << ',' << r.generation << '\n';
  return os.str();
}

}  // namespace uibcost::search
