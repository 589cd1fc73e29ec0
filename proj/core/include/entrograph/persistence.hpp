#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entrograph/graph.hpp"

namespace entrograph {

/// Sorted distinct edge lengths, compared by exact stored value.
std::vector<double> thresholds(const MetricGraph& graph);

/// All vertices, and the edges of length at most epsilon.
MetricGraph filter_at(const MetricGraph& graph, double epsilon);

enum class Strategy { Direct, Incremental, Auto };
/// How one step of a curve was actually computed.
enum class StepMethod { Direct, IncrementalEdge, IncrementalVertex };

const char* to_string(Strategy strategy) noexcept;
const char* to_string(StepMethod method) noexcept;
/// Throws Error(UnknownFormat) for anything but direct / incremental / auto.
Strategy parse_strategy(std::string_view text);
/// Inverse of to_string(StepMethod); throws Error(ParseError).
StepMethod parse_step_method(std::string_view text);

struct CurveStep {
  double epsilon = 0.0;
  double h = 0.0;
  StepMethod method = StepMethod::Direct;
  int iterations = 0;
  double ms = 0.0;
};

struct EntropyCurve {
  std::vector<CurveStep> steps;
  std::vector<double> thresholds;
};

struct PersistenceOptions {
  double tol = 1e-10;
  int max_iter = 200;
  /// Auto takes an eligible incremental step when the touched component has
  /// at most `auto_small_darts` darts, or when its dart count times
  /// `auto_cost_ratio` is below the dart count of the whole filtration graph
  /// (what the direct solver processes). Per dart, the incremental solvers
  /// measured about twice as slow as the direct one.
  std::size_t auto_small_darts = 32;
  double auto_cost_ratio = 2.0;
};

/// Volume entropy of every filtration graph G_eps, eps over the thresholds.
/// Solver errors are rethrown with the offending epsilon in the message.
EntropyCurve persistent_entropy(const MetricGraph& graph, Strategy strategy = Strategy::Auto,
                                const PersistenceOptions& options = {});

enum class CurveFormat { Csv, Json };

/// Throws Error(UnknownFormat).
CurveFormat parse_format(std::string_view text);
const char* to_string(CurveFormat format) noexcept;

std::string export_curve(const EntropyCurve& curve, CurveFormat format);
/// Inverse of export_curve. Thresholds are rebuilt from the step epsilons.
/// Throws Error(ParseError).
EntropyCurve import_curve(std::string_view text, CurveFormat format);

// ---------------------------------------------------------------------------
// Strategy benchmark

struct BenchRow {
  double epsilon = 0.0;
  /// Darts of the largest component touched by the step.
  std::size_t darts = 0;
  std::size_t added_edges = 0;
  double direct_ms = 0.0;
  double incremental_ms = 0.0;
  StepMethod incremental_method = StepMethod::Direct;
  StepMethod auto_method = StepMethod::Direct;
  double auto_ms = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  /// Max |h| difference between the three curves.
  double max_disagreement = 0.0;
  /// Smallest dart count from which the direct solver beat the incremental one
  /// on every incremental-eligible step; nullopt when it never did.
  std::optional<std::size_t> crossover_darts;
  std::size_t incremental_wins = 0;
  std::size_t direct_wins = 0;
};

/// Runs all strategies `repeats` times, keeping the fastest time per step.
BenchReport persistence_bench(const MetricGraph& graph, const PersistenceOptions& options = {},
                              int repeats = 3);

/// Human-readable CSV table of the rows followed by summary comment lines.
std::string bench_table(const BenchReport& report);

}  // namespace entrograph
