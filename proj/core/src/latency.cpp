// SPDX-License-Identifier: Apache-2.0
#include "uibcost/latency.hpp"

#include <fstream>
#include <sstream>

namespace uibcost::roofline {

int LatencyMatrix::model_index(const std::string& name) const {
  for (size_t i = 0; i < models.size(); ++i)
    if (models[i] == name) return int(i);
  return -1;
}

int LatencyMatrix::target_index(const std::string& name) const {
  for (size_t i = 0; i < targets.size(); ++i)
    if (targets[i] == name) return int(i);
  return -1;
}

std::optional<double> LatencyMatrix::at(const std::string& model,
                                        const std::string& target) const {
  const int m = model_index(model);
  const int t = target_index(target);
  if (m < 0 || t < 0) return std::nullopt;
  return latency_ms[m][t];
}

std::vector<std::pair<std::string, double>> LatencyMatrix::column(
    const std::string& target) const {
  const int t = target_index(target);
  if (t < 0) throw Error("unknown target: " + target);
  std::vector<std::pair<std::string, double>> out;
  for (size_t m = 0; m < models.size(); ++m)
    if (latency_ms[m][t]) out.emplace_back(models[m], *latency_ms[m][t]);
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.push_back(cur);
  for (std::string& f : fields) {
    while (!f.empty() && (f.front() == ' ' || f.front() == '\r')) f.erase(f.begin());
    while (!f.empty() && (f.back() == ' ' || f.back() == '\r')) f.pop_back();
  }
  return fields;
}

}  // namespace

LatencyMatrix parse_latency_csv(const std::string& text) {
  LatencyMatrix m;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) throw ParseError(1, "empty CSV");
  ++lineno;
  const auto header = split_csv_line(line);
  if (header.size() < 4 || header[0] != "model" || header[1] != "target" ||
      header[2] != "latency_ms" || header[3] != "top1")
    throw ParseError(1, "expected header model,target,latency_ms,top1");

  auto intern = [](std::vector<std::string>& names, const std::string& n) {
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == n) return int(i);
    names.push_back(n);
    return int(names.size()) - 1;
  };

  struct RawRow { int model, target; double latency; std::optional<double> top1; };
  std::vector<RawRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != 4)
      throw ParseError(lineno, "expected 4 fields, got " + std::to_string(f.size()));
    RawRow r;
    r.model = intern(m.models, f[0]);
    r.target = intern(m.targets, f[1]);
    try {
      r.latency = std::stod(f[2]);
    } catch (...) {
      throw ParseError(lineno, "bad latency value: " + f[2]);
    }
    if (!(r.latency > 0)) throw ParseError(lineno, "latency must be > 0");
    if (!f[3].empty()) {
      try {
        r.top1 = std::stod(f[3]);
      } catch (...) {
        throw ParseError(lineno, "bad top1 value: " + f[3]);
      }
    }
    rows.push_back(r);
  }

  m.latency_ms.assign(m.models.size(),
                      std::vector<std::optional<double>>(m.targets.size()));
  m.top1.assign(m.models.size(), std::nullopt);
  for (const RawRow& r : rows) {
    if (m.latency_ms[r.model][r.target])
      throw ParseError(0, "duplicate entry for " + m.models[r.model] + " / " +
                              m.targets[r.target]);
    m.latency_ms[r.model][r.target] = r.latency;
    if (r.top1) {
      if (m.top1[r.model] && *m.top1[r.model] != *r.top1)
        throw ParseError(0, "inconsistent top1 for " + m.models[r.model]);
      m.top1[r.model] = r.top1;
    }
  }
  return m;
}

LatencyMatrix load_latency_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_latency_csv(ss.str());
}

}  // namespace uibcost::roofline
