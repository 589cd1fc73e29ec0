#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace entrograph {

using VertexId = std::size_t;
using DartId = std::size_t;

/// One orientation of an undirected edge. A loop at x is two distinct darts
/// x -> x that reverse each other.
struct Dart {
  VertexId tail = 0;
  VertexId head = 0;
  double length = 0.0;
  DartId reverse = 0;
};

/// Undirected view of a dart pair; `dart` is the lower-numbered orientation.
struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  double length = 0.0;
  DartId dart = 0;
};

/// Finite metric multigraph stored as darts with a reversal involution.
///
/// Vertices carry opaque string identifiers that survive every edit, so
/// results computed on subgraphs and reductions can be traced back by name.
/// The object is immutable once constructed; editing operations return new
/// graphs. The raw constructor does not check anything: run validate() on
/// graphs that did not come from GraphBuilder.
class MetricGraph {
 public:
  MetricGraph() = default;
  MetricGraph(std::vector<std::string> vertex_names, std::vector<Dart> darts);

  std::size_t vertex_count() const noexcept { return names_.size(); }
  std::size_t dart_count() const noexcept { return darts_.size(); }
  std::size_t edge_count() const noexcept { return darts_.size() / 2; }
  bool empty() const noexcept { return names_.empty(); }

  const std::string& name(VertexId v) const { return names_.at(v); }
  std::span<const std::string> names() const noexcept { return names_; }
  std::optional<VertexId> find(std::string_view name) const;
  /// Throws Error(UnknownVertex).
  VertexId vertex(std::string_view name) const;

  const Dart& dart(DartId d) const { return darts_.at(d); }
  std::span<const Dart> darts() const noexcept { return darts_; }

  /// Darts whose tail is v, ascending by id. Their positions are the
  /// attachment indices used by the primitive-cycle machinery.
  std::span<const DartId> out_darts(VertexId v) const;
  /// Loops contribute 2.
  std::size_t degree(VertexId v) const { return out_darts(v).size(); }

  std::vector<Edge> edges() const;
  bool adjacent(VertexId x, VertexId y) const;
  double min_length() const;
  double max_length() const;

 private:
  std::vector<std::string> names_;
  std::vector<Dart> darts_;
  std::unordered_map<std::string, VertexId> lookup_;
  std::vector<std::size_t> out_offset_;
  std::vector<DartId> out_;
};

/// Accumulates vertices and edges and produces a MetricGraph whose darts come
/// in pairs (2k, 2k+1).
class GraphBuilder {
 public:
  GraphBuilder() = default;
  /// Starts from a copy of `base`, keeping its vertex and dart numbering.
  explicit GraphBuilder(const MetricGraph& base);

  /// Throws Error(InvalidGraph) on a duplicate name.
  VertexId add_vertex(std::string name);
  /// Returns the existing vertex with this name or creates it.
  VertexId vertex(std::string_view name);
  /// Throws on unknown endpoints or a length that is not positive and finite.
  /// Returns the dart oriented u -> v.
  DartId add_edge(VertexId u, VertexId v, double length);

  std::size_t vertex_count() const noexcept { return names_.size(); }
  MetricGraph build() const;

 private:
  std::vector<std::string> names_;
  std::vector<Dart> darts_;
  std::unordered_map<std::string, VertexId> lookup_;
};

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  NonPositiveLength,
  ReversalOutOfRange,
  ReversalFixedPoint,
  ReversalNotInvolution,
  ReversalEndpointMismatch,
  PairedLengthMismatch,
  DanglingEndpoint,
  DuplicateVertexName,
};

const char* to_string(ViolationKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  std::optional<DartId> dart;
  std::optional<VertexId> vertex;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  std::string summary() const;
};

ValidationReport validate(const MetricGraph& graph);
/// Throws Error(InvalidGraph) with the report summary unless the graph is valid.
void require_valid(const MetricGraph& graph);

// ---------------------------------------------------------------------------
// Components and reduction

/// A subgraph together with the parent index of each of its vertices.
struct Subgraph {
  MetricGraph graph;
  std::vector<VertexId> to_parent;
};

/// Connected components ordered by their smallest vertex index. Vertices keep
/// their relative order and darts their relative order.
std::vector<Subgraph> components(const MetricGraph& graph);

/// The connected component containing v, vertices in ascending order.
Subgraph component_containing(const MetricGraph& graph, VertexId v);

/// Index inside `sub` of a parent vertex that belongs to it.
VertexId local_vertex(const Subgraph& sub, VertexId parent);

/// Component label per vertex, numbered like components().
std::vector<std::size_t> component_labels(const MetricGraph& graph);

/// |E| - |V| + 1 per connected component, in components() order.
std::vector<long> first_betti(const MetricGraph& graph);

enum class ComponentKind {
  Trivial,      ///< a tree: no non-backtracking cycles
  SingleCycle,  ///< first Betti number 1
  Hyperbolic,   ///< first Betti number at least 2
};

const char* to_string(ComponentKind kind) noexcept;
ComponentKind classify(long betti) noexcept;

struct ReducedComponent {
  ComponentKind kind;
  long betti;
  /// Empty for Trivial, one vertex with one loop for SingleCycle, minimum
  /// degree 3 for Hyperbolic.
  MetricGraph graph;
  std::vector<VertexId> to_original;
};

struct Reduction {
  /// Disjoint union of the reduced components.
  MetricGraph graph;
  std::vector<VertexId> to_original;
  /// One entry per input component, in components() order.
  std::vector<ReducedComponent> components;

  std::vector<ComponentKind> kinds() const;
};

/// Prunes degree-1 vertices and suppresses degree-2 vertices (merging their
/// two edges into one of the summed length) until every vertex has degree at
/// least 3 or the component reaches its normal form. Volume entropy is
/// unchanged.
Reduction reduce(const MetricGraph& graph);

// ---------------------------------------------------------------------------
// Editing

struct Attachment {
  VertexId vertex = 0;
  double length = 0.0;
};

/// New dart pair x <-> y of length l0 appended after the existing darts.
MetricGraph add_edge(const MetricGraph& graph, VertexId x, VertexId y, double l0);

/// New vertex joined to each attachment vertex. The new vertex is appended
/// last; when `name` is empty a fresh identifier is generated.
MetricGraph add_vertex(const MetricGraph& graph, std::span<const Attachment> attachments,
                       std::string name = {});

/// Drops the dart pair containing `d`.
MetricGraph remove_edge(const MetricGraph& graph, DartId d);

/// Removes every edge incident to v but keeps v (isolated) so vertex ids stay
/// stable. Generating functions on the result are those of G with v deleted.
MetricGraph detach_vertex(const MetricGraph& graph, VertexId v);

/// Keeps all vertices and the edges for which `keep(edge)` holds.
template <typename Pred>
MetricGraph filter_edges(const MetricGraph& graph, Pred keep) {
  GraphBuilder builder;
  for (const auto& n : graph.names()) builder.add_vertex(n);
  for (const Edge& e : graph.edges()) {
    if (keep(e)) builder.add_edge(e.u, e.v, e.length);
  }
  return builder.build();
}

/// Equality of labelled multigraphs: same vertex names, and the same multiset
/// of (endpoint names, length) edges. Numbering is ignored.
bool equivalent(const MetricGraph& a, const MetricGraph& b);

}  // namespace entrograph
