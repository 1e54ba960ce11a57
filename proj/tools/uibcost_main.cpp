// SPDX-License-Identifier: Apache-2.0
//
// uibcost: block-graph cost analysis, roofline latency prediction,
// multi-hardware Pareto metrics, and the two-stage architecture search.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "uibcost/builders.hpp"
#include "uibcost/cost.hpp"
#include "uibcost/executor.hpp"
#include "uibcost/latency.hpp"
#include "uibcost/metrics.hpp"
#include "uibcost/netspec_json.hpp"
#include "uibcost/roofline.hpp"
#include "uibcost/search_config.hpp"
#include "uibcost/svg.hpp"

namespace {

using namespace uibcost;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitInternalError = 3;

ir::NetworkSpec resolve_model(const std::string& name_or_file) {
  if (ir::is_known_model(name_or_file)) return ir::build_by_name(name_or_file);
  if (std::filesystem::exists(name_or_file))
    return ir::load_netspec_file(name_or_file);
  throw UnknownModel("not a registry model or spec file: " + name_or_file);
}

DtypeWidths parse_dtype(const std::string& s) {
  if (s == "int8") return DtypeWidths::int8();
  if (s == "fp16") return DtypeWidths::fp16();
  throw Error("unknown dtype: " + s + " (use int8 or fp16)");
}

void write_or_print(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    while (!cur.empty() && cur.front() == ' ') cur.erase(cur.begin());
    while (!cur.empty() && cur.back() == ' ') cur.pop_back();
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

int cmd_analyze(const std::string& model, const std::string& dtype,
                bool as_json, bool as_csv, const std::string& out_path) {
  const ir::NetworkSpec net = resolve_model(model);
  const cost::CostReport report = cost::network_cost(net, parse_dtype(dtype));
  if (as_json) {
    write_or_print(cost::to_json(report), out_path);
  } else if (as_csv) {
    write_or_print(cost::to_csv(report), out_path);
  } else {
    std::ostringstream os;
    os << "model: " << net.name << "  (input " << net.input_res << "px)\n";
    os << cost::to_csv(report);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "totals: %.3fM params, %.4fG MACs, %.3fMB moved, "
                  "op intensity %.2f MACs/B\n",
                  report.params_m(), report.macs_g(),
                  double(report.total_bytes) / 1e6, report.op_intensity());
    os << buf;
    write_or_print(os.str(), out_path);
  }
  return kExitOk;
}

int cmd_roofline_sweep(const std::vector<std::string>& models,
                       const std::string& rps_arg, const std::string& out_path,
                       const std::string& svg_path, double peak) {
  std::vector<double> rps = roofline::default_ridge_sweep();
  if (!rps_arg.empty()) {
    rps.clear();
    for (const std::string& t : split_list(rps_arg)) rps.push_back(std::stod(t));
  }
  std::vector<cost::CostReport> reports;
  for (const std::string& m : models)
    reports.push_back(cost::network_cost(resolve_model(m)));
  const roofline::SweepTable table = roofline::sweep_ridge_points(reports, rps, peak);
  write_or_print(roofline::sweep_to_csv(table), out_path);
  if (!svg_path.empty()) {
    std::vector<svg::Series> series;
    for (size_t i = 0; i < table.models.size(); ++i) {
      svg::Series s;
      s.label = table.models[i];
      for (size_t j = 0; j < rps.size(); ++j) {
        s.xs.push_back(std::max(rps[j], 0.1));  // log axis
        s.ys.push_back(table.latency_s[i][j] * 1e3);
      }
      series.push_back(std::move(s));
    }
    std::ofstream out(svg_path);
    if (!out) throw Error("cannot write " + svg_path);
    out << svg::line_plot(series, "ridge point (MACs/byte)",
                          "predicted latency (ms)");
  }
  return kExitOk;
}

int cmd_roofline_fit(const std::string& csv_path, const std::string& target,
                     std::vector<std::string> models) {
  const roofline::LatencyMatrix matrix = roofline::load_latency_csv(csv_path);
  if (models.empty()) {
    for (const auto& m : matrix.models)
      if (ir::is_known_model(m)) models.push_back(m);
  }
  std::vector<cost::CostReport> reports;
  std::vector<double> measured;
  std::vector<double> macs;
  for (const std::string& m : models) {
    const auto cell = matrix.at(m, target);
    if (!cell) continue;  // missing measurement: excluded, never imputed
    reports.push_back(cost::network_cost(resolve_model(m)));
    measured.push_back(*cell * 1e-3);
    macs.push_back(double(reports.back().total_macs));
  }
  const roofline::RidgeFit fit = roofline::fit_ridge_point(reports, measured);
  const double rs_mac = roofline::spearman(macs, measured);
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "target=\"%s\" models=%zu rp=%.1f r_s-roofline=%.3f "
                "r_s-mac=%.3f peak=%.3e MACs/s\n",
                target.c_str(), reports.size(), fit.ridge_point,
                fit.spearman_r, rs_mac, fit.peak_macs_per_sec);
  std::cout << buf;
  return kExitOk;
}

int cmd_pareto(const std::string& csv_path, const std::string& agg,
               const std::string& targets_arg, const std::string& ref_model,
               const std::string& out_path, const std::string& svg_path) {
  const roofline::LatencyMatrix matrix = roofline::load_latency_csv(csv_path);
  std::vector<std::string> targets = split_list(targets_arg);
  if (targets.empty()) targets = matrix.targets;

  metrics::NormalizationFactors factors;
  if (agg == "arith") {
    const std::string ref = ref_model.empty() ? "MobileNet-V1" : ref_model;
    for (const std::string& t : targets) {
      const auto cell = matrix.at(ref, t);
      if (!cell)
        throw Error("reference model " + ref + " has no latency for " + t);
      factors.push_back(*cell);
    }
  } else if (agg != "geo") {
    throw Error("aggregation must be geo or arith");
  }

  std::vector<metrics::ModelPoint> points;
  for (size_t m = 0; m < matrix.models.size(); ++m) {
    metrics::LatencyVector lats;
    bool complete = true;
    for (const std::string& t : targets) {
      const auto cell = matrix.at(matrix.models[m], t);
      if (!cell) { complete = false; break; }
      lats.push_back(*cell);
    }
    if (!complete || !matrix.top1[m]) continue;
    const double a = agg == "geo" ? metrics::geo_mean(lats)
                                  : metrics::arith_mean_normalized(lats, factors);
    points.push_back({a, *matrix.top1[m], matrix.models[m]});
  }
  if (points.empty()) throw Error("no model has all requested targets");
  const auto front = metrics::pareto_front(points);

  std::ostringstream os;
  os << "model,agg_latency,top1\n";
  for (const auto& p : front)
    os << p.name << ',' << p.latency << ',' << p.accuracy << '\n';
  write_or_print(os.str(), out_path);

  if (!svg_path.empty()) {
    std::vector<svg::LabeledPoint> pts;
    for (const auto& p : points) {
      bool on_front = false;
      for (const auto& f : front)
        if (f.name == p.name) { on_front = true; break; }
      pts.push_back({p.latency, p.accuracy, p.name, on_front});
    }
    std::ofstream out(svg_path);
    if (!out) throw Error("cannot write " + svg_path);
    const std::string xlab =
        (agg == "geo" ? "geometric-mean" : "normalized arithmetic-mean") +
        std::string(" latency (ms, log)");
    out << svg::scatter_plot(pts, xlab, "ImageNet top-1 (%)");
  }
  return kExitOk;
}

int cmd_search(const std::string& config_path, const std::string& mode_override,
               const std::string& out_dir) {
  search::SearchConfig cfg = search::load_search_config(config_path);
  if (!mode_override.empty()) cfg.mode = mode_override;
  if (const char* env_seed = std::getenv("UIBCOST_SEED"))
    cfg.seed = std::strtoull(env_seed, nullptr, 10);
  const search::QualityOracle oracle = search::oracle_from_config(cfg);

  std::filesystem::create_directories(out_dir);
  auto emit = [&](const std::string& stem, const search::SearchResult& r) {
    std::ofstream log(out_dir + "/" + stem + "_log.csv");
    log << search::eval_log_to_csv(r.log);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%-9s best reward=%.6f quality=%.6f cost=%.6g evals=%llu\n",
                  stem.c_str(), r.best_reward, r.best_quality, r.best_cost,
                  static_cast<unsigned long long>(r.evaluations));
    std::cout << buf;
  };

  if (cfg.mode == "one-stage") {
    const auto r = search::one_stage_search(cfg.space, oracle, cfg.reward,
                                            cfg.one_stage_budget, cfg.seed);
    emit("one_stage", r);
    ir::save_netspec_file(r.best_net, out_dir + "/best.json");
  } else if (cfg.mode == "coarse") {
    const auto r = search::coarse_search(cfg.space, oracle, cfg.reward,
                                         cfg.coarse_budget, cfg.seed);
    emit("coarse", r);
    ir::save_netspec_file(r.best_net, out_dir + "/best.json");
  } else {
    const auto r = search::two_stage_search(cfg.space, oracle, cfg.reward,
                                            cfg.coarse_budget, cfg.fine_budget,
                                            cfg.seed);
    emit("coarse", r.coarse);
    emit("fine", r.fine);
    ir::save_netspec_file(r.fine.best_net, out_dir + "/best.json");
  }
  std::cout << "wrote " << out_dir << "/best.json\n";
  return kExitOk;
}

int cmd_exec_smoke(const std::string& model, int res, std::uint64_t seed) {
  const ir::NetworkSpec net = resolve_model(model);
  exec::RunOptions opt;
  opt.seed = seed;
  if (res > 0) opt.downsample_resolution = res;
  const exec::Tensor out = exec::run_network(net, opt);
  double mn = 1e300, mx = -1e300, mean = 0;
  for (float v : out.data) {
    if (!std::isfinite(v)) throw Error("non-finite activation in output");
    mn = std::min(mn, double(v));
    mx = std::max(mx, double(v));
    mean += v;
  }
  mean /= double(out.data.size());
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%s @%dpx: output %zu values (%dx%dx%d), min=%.4f max=%.4f "
                "mean=%.4f\n",
                net.name.c_str(), res > 0 ? res : net.input_res,
                out.data.size(), out.shape.h, out.shape.w, out.shape.c, mn, mx,
                mean);
  std::cout << buf;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uibcost: mobile block-graph cost, roofline, and search toolkit"};
  app.require_subcommand(1);

  // analyze
  std::string an_model, an_dtype = "int8", an_out;
  bool an_json = false, an_csv = false;
  auto* analyze = app.add_subcommand("analyze", "per-block and total cost of a model");
  analyze->add_option("model", an_model, "registry name or netspec JSON file")->required();
  analyze->add_option("--dtype", an_dtype, "int8 (default) or fp16");
  analyze->add_flag("--json", an_json, "emit JSON");
  analyze->add_flag("--csv", an_csv, "emit bare CSV");
  analyze->add_option("-o,--out", an_out, "write to file instead of stdout");

  // roofline
  std::vector<std::string> rf_models;
  std::string rf_rps, rf_out, rf_svg, rf_fit_csv, rf_target;
  bool rf_sweep = false;
  double rf_peak = 1e12;
  auto* roofline_cmd = app.add_subcommand("roofline", "ridge-point sweeps and empirical fits");
  roofline_cmd->add_option("models", rf_models, "registry names or spec files");
  roofline_cmd->add_flag("--rp-sweep", rf_sweep, "predicted latency across ridge points");
  roofline_cmd->add_option("--rps", rf_rps, "comma list of ridge points (default 0,1,5,10,50,100,500)");
  roofline_cmd->add_option("--peak", rf_peak, "peak MACs/s scale (default 1e12)");
  roofline_cmd->add_option("--fit", rf_fit_csv, "latency CSV to fit a ridge point against");
  roofline_cmd->add_option("--target", rf_target, "execution target column for --fit");
  roofline_cmd->add_option("-o,--out", rf_out, "sweep CSV output path");
  roofline_cmd->add_option("--svg", rf_svg, "sweep SVG output path");

  // pareto
  std::string pa_csv, pa_agg = "geo", pa_targets, pa_ref, pa_out, pa_svg;
  auto* pareto = app.add_subcommand("pareto", "latency/accuracy frontier from a latency CSV");
  pareto->add_option("csv", pa_csv, "latency CSV (model,target,latency_ms,top1)")->required();
  pareto->add_option("--agg", pa_agg, "geo (default) or arith");
  pareto->add_option("--targets", pa_targets, "comma list of targets (default: all)");
  pareto->add_option("--ref", pa_ref, "reference model for arith normalization");
  pareto->add_option("-o,--out", pa_out, "frontier CSV output path");
  pareto->add_option("--svg", pa_svg, "scatter SVG output path");

  // search
  std::string se_config, se_mode, se_out = ".";
  auto* search_cmd = app.add_subcommand("search", "two-stage architecture search");
  search_cmd->add_option("config", se_config, "JSON search configuration")->required();
  search_cmd->add_option("--mode", se_mode, "two-stage | one-stage | coarse (overrides config)");
  search_cmd->add_option("-o,--out", se_out, "output directory");

  // exec-smoke
  std::string ex_model;
  int ex_res = 64;
  std::uint64_t ex_seed = 0;
  auto* smoke = app.add_subcommand("exec-smoke", "run the reference executor");
  smoke->add_option("model", ex_model, "registry name or spec file")->required();
  smoke->add_option("--res", ex_res, "input resolution override (default 64, 0 = native)");
  smoke->add_option("--seed", ex_seed, "weight/input seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) return cmd_analyze(an_model, an_dtype, an_json, an_csv, an_out);
    if (*roofline_cmd) {
      if (!rf_fit_csv.empty()) {
        if (rf_target.empty()) throw Error("--fit requires --target");
        return cmd_roofline_fit(rf_fit_csv, rf_target, rf_models);
      }
      if (rf_sweep) {
        if (rf_models.empty()) throw Error("--rp-sweep requires at least one model");
        return cmd_roofline_sweep(rf_models, rf_rps, rf_out, rf_svg, rf_peak);
      }
      throw Error("roofline needs --rp-sweep or --fit");
    }
    if (*pareto) return cmd_pareto(pa_csv, pa_agg, pa_targets, pa_ref, pa_out, pa_svg);
    if (*search_cmd) return cmd_search(se_config, se_mode, se_out);
    if (*smoke) return cmd_exec_smoke(ex_model, ex_res, ex_seed);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
  return kExitOk;
}
