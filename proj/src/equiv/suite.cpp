#include <omp.h>

#include <algorithm>
#include <charconv>
#include <sstream>

#include "internal.hpp"
#include "json.hpp"

namespace spartan {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t k = s.find(sep, start);
    auto piece = trim(s.substr(start, k == std::string_view::npos ? std::string_view::npos : k - start));
    if (!piece.empty()) out.emplace_back(piece);
    if (k == std::string_view::npos) return out;
    start = k + 1;
  }
}

std::uint64_t to_uint(std::string_view key, std::string_view v) {
  std::uint64_t n = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
  if (ec != std::errc() || p != v.data() + v.size()) throw std::invalid_argument("config: bad number for " + std::string(key));
  return n;
}

struct Task {
  std::size_t law;
  std::size_t instance;
  std::size_t context;
};

struct Plan {
  std::vector<LawDef> laws;
  std::vector<std::vector<Context>> contexts;
  std::vector<Task> tasks;
};

Plan make_plan(const std::vector<LawDef>& laws, const SuiteConfig& cfg) {
  Plan p;
  for (const auto& law : laws) {
    if (!cfg.only.empty() && std::find(cfg.only.begin(), cfg.only.end(), law.name) == cfg.only.end()) continue;
    LawDef l = law;
    if (cfg.class_override) l.cls = *cfg.class_override;
    p.contexts.push_back(enumerate_contexts(l.cls, cfg.check.pool, cfg.check.size_bound, l.env));
    p.laws.push_back(std::move(l));
  }
  for (std::size_t i = 0; i < p.laws.size(); ++i)
    for (std::size_t k = 0; k < p.laws[i].instances.size(); ++k)
      for (std::size_t c = 0; c < p.contexts[i].size(); ++c) p.tasks.push_back({i, k, c});
  return p;
}

SuiteReport assemble(const Plan& p, const std::vector<CheckResult>& results, const SuiteConfig& cfg) {
  SuiteReport r;
  r.size_bound = cfg.check.size_bound;
  r.fuel = cfg.check.fuel;
  for (const auto& law : p.laws) r.verdicts.push_back(detail::empty_verdict(law));
  for (std::size_t t = 0; t < p.tasks.size(); ++t) {
    const auto& task = p.tasks[t];
    detail::accumulate(r.verdicts[task.law], p.laws[task.law], task.instance, p.contexts[task.law][task.context],
                       results[t], cfg.check.max_dot_dumps);
  }
  return r;
}

std::string outcome_text(const Outcome& o) {
  switch (o.kind) {
    case Outcome::Kind::Final: return "final " + std::to_string(o.steps);
    case Outcome::Kind::Stuck: return "stuck " + std::to_string(o.steps);
    case Outcome::Kind::Fuel: return "fuel " + std::to_string(o.steps);
  }
  return "";
}

std::string range_text(const StepRange& s) {
  if (s.finals == 0) return "-";
  return std::to_string(s.min) + ".." + std::to_string(s.max);
}

}  // namespace

SuiteConfig parse_config(std::string_view text) {
  SuiteConfig cfg;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument("config: expected key=value: " + std::string(line));
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key == "size") {
      cfg.check.size_bound = to_uint(key, value);
      if (cfg.check.size_bound == 0) throw std::invalid_argument("config: size must be at least 1");
    } else if (key == "fuel") {
      cfg.check.fuel = to_uint(key, value);
    } else if (key == "jobs") {
      cfg.jobs = std::max<std::uint64_t>(1, to_uint(key, value));
    } else if (key == "class") {
      cfg.class_override = parse_context_class(value);
      if (!cfg.class_override) throw std::invalid_argument("config: class must be all or bf");
    } else if (key == "laws") {
      cfg.only = split(value, ',');
    } else if (key == "pool") {
      cfg.check.pool.clear();
      for (const auto& t : split(value, ';')) cfg.check.pool.push_back(parse(t));
      for (const auto& t : cfg.check.pool)
        if (!is_program(*t)) throw std::invalid_argument("config: pool terms must be closed programs");
    } else if (key == "dot_dumps") {
      cfg.check.max_dot_dumps = to_uint(key, value);
    } else {
      throw std::invalid_argument("config: unknown key " + std::string(key));
    }
  }
  return cfg;
}

bool SuiteReport::all_supported() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const Verdict& v) { return v.status == VerdictStatus::Supported; });
}

SuiteReport run_suite_serial(const std::vector<LawDef>& laws, const SuiteConfig& cfg) {
  Plan p = make_plan(laws, cfg);
  std::vector<CheckResult> results(p.tasks.size());
  for (std::size_t t = 0; t < p.tasks.size(); ++t) {
    const auto& task = p.tasks[t];
    results[t] = check_in_context(p.laws[task.law], task.instance, p.contexts[task.law][task.context], cfg.check.fuel);
  }
  return assemble(p, results, cfg);
}

SuiteReport run_suite(const std::vector<LawDef>& laws, const SuiteConfig& cfg) {
  Plan p = make_plan(laws, cfg);
  std::vector<CheckResult> results(p.tasks.size());
  const auto n = static_cast<std::int64_t>(p.tasks.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(static_cast<int>(cfg.jobs))
  for (std::int64_t t = 0; t < n; ++t) {
    const auto& task = p.tasks[static_cast<std::size_t>(t)];
    results[static_cast<std::size_t>(t)] =
        check_in_context(p.laws[task.law], task.instance, p.contexts[task.law][task.context], cfg.check.fuel);
  }
  return assemble(p, results, cfg);
}

std::string report_text(const SuiteReport& r) {
  std::ostringstream os;
  os << "law suite: size " << r.size_bound << ", fuel " << r.fuel << "\n\n";
  std::size_t counts[3] = {0, 0, 0};
  for (const auto& v : r.verdicts) {
    ++counts[static_cast<int>(v.status)];
    os << "law " << v.law << "  class " << to_string(v.cls) << "  relations";
    for (const auto& rel : v.relations) os << " " << rel.text();
    os << "\n  instances " << v.instances << "  checks " << v.contexts << "  inconclusive " << v.inconclusive
       << "\n  lhs steps " << range_text(v.lhs_steps) << " (" << v.lhs_steps.finals << " final)"
       << "  rhs steps " << range_text(v.rhs_steps) << " (" << v.rhs_steps.finals << " final)"
       << "\n  counterexamples " << v.counterexamples.size() << "\n  status " << to_string(v.status) << "\n";
    for (const auto& ce : v.counterexamples) {
      os << "  - instance " << ce.instance << "  " << ce.relation << "  context " << ce.context << "\n    lhs "
         << outcome_text(ce.lhs) << "  rhs " << outcome_text(ce.rhs) << "\n";
      if (!ce.dot.empty()) {
        os << "    dot of the plugged left-hand side:\n";
        std::istringstream dot(ce.dot);
        for (std::string line; std::getline(dot, line);) os << "      " << line << "\n";
      }
    }
    os << "\n";
  }
  os << "summary: " << r.verdicts.size() << " laws, " << counts[0] << " supported, " << counts[1] << " refuted, "
     << counts[2] << " inconclusive\n";
  return os.str();
}

std::string report_json(const SuiteReport& r) {
  using nlohmann::ordered_json;
  auto outcome = [](const Outcome& o) {
    static const char* const kinds[] = {"final", "stuck", "fuel"};
    ordered_json j;
    j["kind"] = kinds[static_cast<int>(o.kind)];
    j["steps"] = o.steps;
    if (!o.reason.empty()) j["reason"] = o.reason;
    return j;
  };
  auto range = [](const StepRange& s) {
    ordered_json j;
    j["finals"] = s.finals;
    if (s.finals) {
      j["min"] = s.min;
      j["max"] = s.max;
    }
    return j;
  };
  ordered_json root;
  root["size"] = r.size_bound;
  root["fuel"] = r.fuel;
  root["laws"] = ordered_json::array();
  for (const auto& v : r.verdicts) {
    ordered_json j;
    j["name"] = v.law;
    j["class"] = to_string(v.cls);
    j["relations"] = ordered_json::array();
    for (const auto& rel : v.relations) j["relations"].push_back(rel.text());
    j["instances"] = v.instances;
    j["checks"] = v.contexts;
    j["inconclusive"] = v.inconclusive;
    j["lhs_steps"] = range(v.lhs_steps);
    j["rhs_steps"] = range(v.rhs_steps);
    j["status"] = to_string(v.status);
    j["counterexamples"] = ordered_json::array();
    for (const auto& ce : v.counterexamples) {
      ordered_json c;
      c["instance"] = ce.instance;
      c["context"] = ce.context;
      c["relation"] = ce.relation;
      c["lhs"] = outcome(ce.lhs);
      c["rhs"] = outcome(ce.rhs);
      if (!ce.dot.empty()) c["dot"] = ce.dot;
      j["counterexamples"].push_back(std::move(c));
    }
    root["laws"].push_back(std::move(j));
  }
  root["all_supported"] = r.all_supported();
  return root.dump(2) + "\n";
}

}  // namespace spartan
