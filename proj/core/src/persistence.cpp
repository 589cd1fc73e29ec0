#include "entrograph/persistence.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include <json.hpp>

#include "entrograph/entropy.hpp"
#include "entrograph/error.hpp"
#include "entrograph/incremental.hpp"

namespace entrograph {

std::vector<double> thresholds(const MetricGraph& graph) {
  std::vector<double> out;
  for (const Edge& e : graph.edges()) out.push_back(e.length);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

MetricGraph filter_at(const MetricGraph& graph, double epsilon) {
  return filter_edges(graph, [epsilon](const Edge& e) { return e.length <= epsilon; });
}

const char* to_string(Strategy strategy) noexcept {
  switch (strategy) {
    case Strategy::Direct: return "direct";
    case Strategy::Incremental: return "incremental";
    case Strategy::Auto: return "auto";
  }
  return "unknown";
}

const char* to_string(StepMethod method) noexcept {
  switch (method) {
    case StepMethod::Direct: return "direct";
    case StepMethod::IncrementalEdge: return "incremental-edge";
    case StepMethod::IncrementalVertex: return "incremental-vertex";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view text) {
  if (text == "direct") return Strategy::Direct;
  if (text == "incremental") return Strategy::Incremental;
  if (text == "auto") return Strategy::Auto;
  throw Error(ErrorCode::UnknownFormat, "unknown strategy '" + std::string(text) + "'");
}

StepMethod parse_step_method(std::string_view text) {
  for (StepMethod m : {StepMethod::Direct, StepMethod::IncrementalEdge, StepMethod::IncrementalVertex}) {
    if (text == to_string(m)) return m;
  }
  throw Error(ErrorCode::ParseError, "unknown step method '" + std::string(text) + "'");
}

namespace {

using Clock = std::chrono::steady_clock;

/// What a filtration step adds, relative to the previous graph.
struct StepPlan {
  StepMethod method = StepMethod::Direct;
  VertexId x = 0;
  VertexId y = 0;
  std::vector<Attachment> attachments;
  std::size_t darts = 0;  // darts of the component the incremental solver works on
  std::size_t added = 0;
};

StepPlan plan_step(const MetricGraph& prev, const std::vector<Edge>& added) {
  StepPlan plan;
  plan.added = added.size();
  if (added.empty() || prev.edge_count() == 0) return plan;
  const std::vector<std::size_t> label = component_labels(prev);
  auto component_darts = [&](VertexId v) {
    std::size_t n = 0;
    for (VertexId u = 0; u < prev.vertex_count(); ++u) {
      if (label[u] == label[v]) n += prev.degree(u);
    }
    return n;
  };

  if (added.size() == 1) {
    const Edge& e = added.front();
    if (e.u != e.v && label[e.u] == label[e.v] && !prev.adjacent(e.u, e.v)) {
      plan.method = StepMethod::IncrementalEdge;
      plan.x = e.u;
      plan.y = e.v;
      plan.darts = component_darts(e.u);
    }
    return plan;
  }
  if (added.size() < 3) return plan;

  // One fresh vertex joined by every added edge to a single old component.
  for (VertexId hub : {added.front().u, added.front().v}) {
    if (prev.degree(hub) != 0) continue;
    std::vector<Attachment> att;
    bool ok = true;
    for (const Edge& e : added) {
      if (e.u == e.v || (e.u != hub && e.v != hub)) {
        ok = false;
        break;
      }
      const VertexId other = e.u == hub ? e.v : e.u;
      if (prev.degree(other) == 0 || label[other] != label[att.empty() ? other : att.front().vertex]) {
        ok = false;
        break;
      }
      att.push_back({other, e.length});
    }
    if (ok) {
      plan.method = StepMethod::IncrementalVertex;
      plan.attachments = std::move(att);
      plan.darts = component_darts(plan.attachments.front().vertex);
      return plan;
    }
  }
  return plan;
}

std::string at_epsilon(double epsilon, const std::string& what) {
  std::ostringstream os;
  os.precision(17);
  os << "at epsilon = " << epsilon << ": " << what;
  return os.str();
}

}  // namespace

EntropyCurve persistent_entropy(const MetricGraph& graph, Strategy strategy,
                                const PersistenceOptions& options) {
  require_valid(graph);
  EntropyCurve curve;
  curve.thresholds = thresholds(graph);

  EntropyOptions eo;
  eo.tol = options.tol;
  eo.max_iter = options.max_iter;
  IncrementalOptions io;
  io.tol = std::min(options.tol, 1e-12);
  io.whole_graph = false;

  const std::vector<Edge> all = graph.edges();
  MetricGraph prev = filter_at(graph, -1.0);
  double prev_h = 0.0;
  for (double eps : curve.thresholds) {
    std::vector<Edge> added;
    for (const Edge& e : all) {
      if (e.length == eps) added.push_back(e);
    }
    MetricGraph current = filter_at(graph, eps);
    const auto start = Clock::now();
    CurveStep step;
    step.epsilon = eps;
    try {
      StepPlan plan = strategy == Strategy::Direct ? StepPlan{} : plan_step(prev, added);
      if (strategy == Strategy::Auto && plan.darts > options.auto_small_darts &&
          options.auto_cost_ratio * static_cast<double>(plan.darts) >=
              static_cast<double>(current.dart_count())) {
        plan.method = StepMethod::Direct;
      }
      io.floor = prev_h;
      switch (plan.method) {
        case StepMethod::IncrementalEdge: {
          const EdgeAdditionResult r = entropy_after_edge(prev, plan.x, plan.y, eps, io);
          step.h = std::max(prev_h, r.h_prime);
          step.iterations = r.iterations;
          break;
        }
        case StepMethod::IncrementalVertex: {
          const VertexAdditionResult r =
              entropy_after_vertex(prev, plan.attachments, VertexVariant::TransferDA, io);
          step.h = std::max(prev_h, r.h_prime);
          step.iterations = r.iterations;
          break;
        }
        case StepMethod::Direct: {
          const EntropyResult r = volume_entropy(current, eo, prev_h);
          step.h = std::max(prev_h, r.h);
          step.iterations = r.iterations;
          break;
        }
      }
      step.method = plan.method;
    } catch (const Error& e) {
      throw Error(e.code(), at_epsilon(eps, e.what()));
    }
    step.ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    curve.steps.push_back(step);
    prev_h = step.h;
    prev = std::move(current);
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Serialization

CurveFormat parse_format(std::string_view text) {
  if (text == "csv") return CurveFormat::Csv;
  if (text == "json") return CurveFormat::Json;
  throw Error(ErrorCode::UnknownFormat, "unknown format '" + std::string(text) + "'");
}

const char* to_string(CurveFormat format) noexcept {
  return format == CurveFormat::Csv ? "csv" : "json";
}

std::string export_curve(const EntropyCurve& curve, CurveFormat format) {
  if (format == CurveFormat::Json) {
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const CurveStep& s : curve.steps) {
      nlohmann::ordered_json j;
      j["epsilon"] = s.epsilon;
      j["h"] = s.h;
      j["strategy"] = to_string(s.method);
      j["iterations"] = s.iterations;
      j["ms"] = s.ms;
      steps.push_back(std::move(j));
    }
    nlohmann::ordered_json doc;
    doc["steps"] = std::move(steps);
    return doc.dump(2) + "\n";
  }
  std::string out = "epsilon,h,strategy,iterations,ms\n";
  char buf[160];
  for (const CurveStep& s : curve.steps) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%s,%d,%.17g\n", s.epsilon, s.h, to_string(s.method),
                  s.iterations, s.ms);
    out += buf;
  }
  return out;
}

EntropyCurve import_curve(std::string_view text, CurveFormat format) {
  EntropyCurve curve;
  try {
    if (format == CurveFormat::Json) {
      const auto doc = nlohmann::json::parse(text);
      for (const auto& j : doc.at("steps")) {
        CurveStep s;
        s.epsilon = j.at("epsilon").get<double>();
        s.h = j.at("h").get<double>();
        s.method = parse_step_method(j.at("strategy").get<std::string>());
        s.iterations = j.at("iterations").get<int>();
        s.ms = j.at("ms").get<double>();
        curve.steps.push_back(s);
      }
    } else {
      std::istringstream in{std::string(text)};
      std::string line;
      if (!std::getline(in, line) || line != "epsilon,h,strategy,iterations,ms") {
        throw Error(ErrorCode::ParseError, "missing CSV header");
      }
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string f[5];
        for (auto& field : f) {
          if (!std::getline(row, field, ',')) throw Error(ErrorCode::ParseError, "short CSV row: " + line);
        }
        CurveStep s;
        s.epsilon = std::stod(f[0]);
        s.h = std::stod(f[1]);
        s.method = parse_step_method(f[2]);
        s.iterations = std::stoi(f[3]);
        s.ms = std::stod(f[4]);
        curve.steps.push_back(s);
      }
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("curve parse error: ") + e.what());
  }
  for (const CurveStep& s : curve.steps) curve.thresholds.push_back(s.epsilon);
  return curve;
}

// ---------------------------------------------------------------------------
// Benchmark

BenchReport persistence_bench(const MetricGraph& graph, const PersistenceOptions& options,
                              int repeats) {
  repeats = std::max(repeats, 1);
  auto fastest = [&](Strategy s) {
    EntropyCurve best = persistent_entropy(graph, s, options);
    for (int k = 1; k < repeats; ++k) {
      const EntropyCurve c = persistent_entropy(graph, s, options);
      for (std::size_t i = 0; i < c.steps.size(); ++i) {
        best.steps[i].ms = std::min(best.steps[i].ms, c.steps[i].ms);
      }
    }
    return best;
  };
  const EntropyCurve direct = fastest(Strategy::Direct);
  const EntropyCurve incremental = fastest(Strategy::Incremental);
  const EntropyCurve automatic = fastest(Strategy::Auto);

  BenchReport report;
  const std::vector<Edge> all = graph.edges();
  MetricGraph prev = filter_at(graph, -1.0);
  std::map<std::size_t, std::pair<int, int>> by_darts;  // darts -> (incremental wins, direct wins)
  for (std::size_t i = 0; i < direct.steps.size(); ++i) {
    const double eps = direct.steps[i].epsilon;
    std::vector<Edge> added;
    for (const Edge& e : all) {
      if (e.length == eps) added.push_back(e);
    }
    const StepPlan plan = plan_step(prev, added);
    BenchRow row;
    row.epsilon = eps;
    row.darts = plan.darts;
    row.added_edges = added.size();
    row.direct_ms = direct.steps[i].ms;
    row.incremental_ms = incremental.steps[i].ms;
    row.incremental_method = incremental.steps[i].method;
    row.auto_method = automatic.steps[i].method;
    row.auto_ms = automatic.steps[i].ms;
    report.rows.push_back(row);
    report.max_disagreement = std::max({report.max_disagreement,
                                        std::abs(direct.steps[i].h - incremental.steps[i].h),
                                        std::abs(direct.steps[i].h - automatic.steps[i].h)});
    if (row.incremental_method != StepMethod::Direct) {
      auto& tally = by_darts[row.darts];
      if (row.incremental_ms < row.direct_ms) {
        ++tally.first;
        ++report.incremental_wins;
      } else {
        ++tally.second;
        ++report.direct_wins;
      }
    }
    prev = filter_at(graph, eps);
  }
  // Crossover: smallest dart count from which direct wins on every eligible step.
  for (auto it = by_darts.rbegin(); it != by_darts.rend(); ++it) {
    if (it->second.first != 0) break;
    report.crossover_darts = it->first;
  }
  return report;
}

std::string bench_table(const BenchReport& report) {
  std::ostringstream os;
  os << "epsilon,darts,added,direct_ms,incremental_ms,incremental_method,auto_method,auto_ms\n";
  char buf[256];
  for (const BenchRow& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%.10g,%zu,%zu,%.4f,%.4f,%s,%s,%.4f\n", r.epsilon, r.darts,
                  r.added_edges, r.direct_ms, r.incremental_ms, to_string(r.incremental_method),
                  to_string(r.auto_method), r.auto_ms);
    os << buf;
  }
  os << "# max_disagreement " << report.max_disagreement << "\n";
  os << "# eligible steps: incremental faster " << report.incremental_wins << ", direct faster "
     << report.direct_wins << "\n";
  if (report.crossover_darts) {
    os << "# crossover: direct faster on every eligible step from " << *report.crossover_darts
       << " darts\n";
  } else {
    os << "# crossover: not reached on this graph\n";
  }
  return os.str();
}

}  // namespace entrograph
