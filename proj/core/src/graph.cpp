#include "entrograph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>
#include <tuple>

#include "entrograph/error.hpp"

namespace entrograph {

// ---------------------------------------------------------------------------
// MetricGraph

MetricGraph::MetricGraph(std::vector<std::string> vertex_names, std::vector<Dart> darts)
    : names_(std::move(vertex_names)), darts_(std::move(darts)) {
  lookup_.reserve(names_.size());
  for (VertexId v = 0; v < names_.size(); ++v) lookup_.emplace(names_[v], v);

  const std::size_t n = names_.size();
  out_offset_.assign(n + 1, 0);
  for (const Dart& d : darts_) {
    if (d.tail < n) ++out_offset_[d.tail + 1];
  }
  std::partial_sum(out_offset_.begin(), out_offset_.end(), out_offset_.begin());
  out_.resize(out_offset_[n]);
  std::vector<std::size_t> fill(out_offset_.begin(), out_offset_.end() - 1);
  for (DartId id = 0; id < darts_.size(); ++id) {
    const VertexId t = darts_[id].tail;
    if (t < n) out_[fill[t]++] = id;
  }
}

std::optional<VertexId> MetricGraph::find(std::string_view name) const {
  auto it = lookup_.find(std::string(name));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

VertexId MetricGraph::vertex(std::string_view name) const {
  if (auto v = find(name)) return *v;
  throw Error(ErrorCode::UnknownVertex, "no vertex named '" + std::string(name) + "'");
}

std::span<const DartId> MetricGraph::out_darts(VertexId v) const {
  if (v >= names_.size()) {
    throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(v) + " out of range");
  }
  return {out_.data() + out_offset_[v], out_offset_[v + 1] - out_offset_[v]};
}

std::vector<Edge> MetricGraph::edges() const {
  std::vector<Edge> result;
  result.reserve(darts_.size() / 2);
  for (DartId id = 0; id < darts_.size(); ++id) {
    const Dart& d = darts_[id];
    if (id < d.reverse) result.push_back({d.tail, d.head, d.length, id});
  }
  return result;
}

bool MetricGraph::adjacent(VertexId x, VertexId y) const {
  for (DartId d : out_darts(x)) {
    if (darts_[d].head == y) return true;
  }
  return false;
}

double MetricGraph::min_length() const {
  double m = std::numeric_limits<double>::infinity();
  for (const Dart& d : darts_) m = std::min(m, d.length);
  return m;
}

double MetricGraph::max_length() const {
  double m = 0.0;
  for (const Dart& d : darts_) m = std::max(m, d.length);
  return m;
}

// ---------------------------------------------------------------------------
// GraphBuilder

GraphBuilder::GraphBuilder(const MetricGraph& base)
    : names_(base.names().begin(), base.names().end()),
      darts_(base.darts().begin(), base.darts().end()) {
  for (VertexId v = 0; v < names_.size(); ++v) lookup_.emplace(names_[v], v);
}

VertexId GraphBuilder::add_vertex(std::string name) {
  if (lookup_.count(name) != 0) {
    throw Error(ErrorCode::InvalidGraph, "duplicate vertex name '" + name + "'");
  }
  const VertexId id = names_.size();
  lookup_.emplace(name, id);
  names_.push_back(std::move(name));
  return id;
}

VertexId GraphBuilder::vertex(std::string_view name) {
  auto it = lookup_.find(std::string(name));
  if (it != lookup_.end()) return it->second;
  return add_vertex(std::string(name));
}

DartId GraphBuilder::add_edge(VertexId u, VertexId v, double length) {
  if (u >= names_.size() || v >= names_.size()) {
    throw Error(ErrorCode::UnknownVertex, "edge endpoint out of range");
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    std::ostringstream os;
    os << "edge length must be positive and finite, got " << length;
    throw Error(ErrorCode::NonPositiveLength, os.str());
  }
  const DartId forward = darts_.size();
  darts_.push_back({u, v, length, forward + 1});
  darts_.push_back({v, u, length, forward});
  return forward;
}

MetricGraph GraphBuilder::build() const { return MetricGraph(names_, darts_); }

// ---------------------------------------------------------------------------
// Validation

const char* to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::NonPositiveLength: return "non-positive length";
    case ViolationKind::ReversalOutOfRange: return "reversal out of range";
    case ViolationKind::ReversalFixedPoint: return "reversal fixed point";
    case ViolationKind::ReversalNotInvolution: return "reversal not an involution";
    case ViolationKind::ReversalEndpointMismatch: return "reversal endpoint mismatch";
    case ViolationKind::PairedLengthMismatch: return "paired length mismatch";
    case ViolationKind::DanglingEndpoint: return "dangling endpoint";
    case ViolationKind::DuplicateVertexName: return "duplicate vertex name";
  }
  return "unknown violation";
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].message;
  }
  return os.str();
}

ValidationReport validate(const MetricGraph& graph) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, std::optional<DartId> d, std::optional<VertexId> v,
                 const std::string& detail) {
    std::string msg = to_string(kind);
    if (!detail.empty()) msg += " (" + detail + ")";
    report.violations.push_back({kind, d, v, std::move(msg)});
  };

  const auto names = graph.names();
  std::vector<std::string> sorted(names.begin(), names.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1]) {
      add(ViolationKind::DuplicateVertexName, std::nullopt, graph.find(sorted[i]),
          "'" + sorted[i] + "'");
    }
  }

  const std::size_t n = graph.vertex_count();
  const auto darts = graph.darts();
  for (DartId id = 0; id < darts.size(); ++id) {
    const Dart& d = darts[id];
    const std::string where = "dart " + std::to_string(id);
    if (!(d.length > 0.0) || !std::isfinite(d.length)) {
      add(ViolationKind::NonPositiveLength, id, std::nullopt, where);
    }
    if (d.tail >= n || d.head >= n) {
      add(ViolationKind::DanglingEndpoint, id, std::nullopt, where);
    }
    if (d.reverse >= darts.size()) {
      add(ViolationKind::ReversalOutOfRange, id, std::nullopt, where);
      continue;
    }
    if (d.reverse == id) {
      add(ViolationKind::ReversalFixedPoint, id, std::nullopt, where);
      continue;
    }
    const Dart& r = darts[d.reverse];
    if (r.reverse != id) add(ViolationKind::ReversalNotInvolution, id, std::nullopt, where);
    if (r.tail != d.head || r.head != d.tail) {
      add(ViolationKind::ReversalEndpointMismatch, id, std::nullopt, where);
    }
    if (r.length != d.length && id < d.reverse) {
      add(ViolationKind::PairedLengthMismatch, id, std::nullopt, where);
    }
  }
  return report;
}

void require_valid(const MetricGraph& graph) {
  const ValidationReport report = validate(graph);
  if (!report.ok()) throw Error(ErrorCode::InvalidGraph, report.summary());
}

// ---------------------------------------------------------------------------
// Components

std::vector<std::size_t> component_labels(const MetricGraph& graph) {
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  const std::size_t n = graph.vertex_count();
  std::vector<std::size_t> label(n, kUnset);
  std::size_t next = 0;
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < n; ++s) {
    if (label[s] != kUnset) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      for (DartId d : graph.out_darts(v)) {
        const VertexId w = graph.dart(d).head;
        if (label[w] == kUnset) {
          label[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return label;
}

namespace {

/// Extracts the vertices flagged in `keep` (with all darts among them).
Subgraph induced(const MetricGraph& graph, const std::vector<char>& keep) {
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> new_index(graph.vertex_count(), kNone);
  Subgraph sub;
  std::vector<std::string> names;
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    if (!keep[v]) continue;
    new_index[v] = names.size();
    names.push_back(graph.name(v));
    sub.to_parent.push_back(v);
  }
  std::vector<std::size_t> new_dart(graph.dart_count(), kNone);
  std::vector<DartId> kept;
  for (DartId d = 0; d < graph.dart_count(); ++d) {
    const Dart& dd = graph.dart(d);
    if (keep[dd.tail] && keep[dd.head]) {
      new_dart[d] = kept.size();
      kept.push_back(d);
    }
  }
  std::vector<Dart> darts;
  darts.reserve(kept.size());
  for (DartId d : kept) {
    const Dart& dd = graph.dart(d);
    darts.push_back({new_index[dd.tail], new_index[dd.head], dd.length, new_dart[dd.reverse]});
  }
  sub.graph = MetricGraph(std::move(names), std::move(darts));
  return sub;
}

}  // namespace

std::vector<Subgraph> components(const MetricGraph& graph) {
  const auto label = component_labels(graph);
  const std::size_t count =
      label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
  std::vector<Subgraph> result;
  result.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<char> keep(graph.vertex_count(), 0);
    for (VertexId v = 0; v < graph.vertex_count(); ++v) keep[v] = label[v] == c;
    result.push_back(induced(graph, keep));
  }
  return result;
}

Subgraph component_containing(const MetricGraph& graph, VertexId v) {
  if (v >= graph.vertex_count()) {
    throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(v) + " out of range");
  }
  const auto label = component_labels(graph);
  std::vector<char> keep(graph.vertex_count(), 0);
  for (VertexId u = 0; u < graph.vertex_count(); ++u) keep[u] = label[u] == label[v];
  return induced(graph, keep);
}

VertexId local_vertex(const Subgraph& sub, VertexId parent) {
  auto it = std::lower_bound(sub.to_parent.begin(), sub.to_parent.end(), parent);
  if (it == sub.to_parent.end() || *it != parent) {
    throw Error(ErrorCode::UnknownVertex, "vertex is not part of the subgraph");
  }
  return static_cast<VertexId>(it - sub.to_parent.begin());
}

std::vector<long> first_betti(const MetricGraph& graph) {
  const auto label = component_labels(graph);
  const std::size_t count =
      label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
  std::vector<long> vertices(count, 0);
  std::vector<long> edges(count, 0);
  for (VertexId v = 0; v < graph.vertex_count(); ++v) ++vertices[label[v]];
  for (const Edge& e : graph.edges()) ++edges[label[e.u]];
  std::vector<long> betti(count);
  for (std::size_t c = 0; c < count; ++c) betti[c] = edges[c] - vertices[c] + 1;
  return betti;
}

const char* to_string(ComponentKind kind) noexcept {
  switch (kind) {
    case ComponentKind::Trivial: return "trivial";
    case ComponentKind::SingleCycle: return "single-cycle";
    case ComponentKind::Hyperbolic: return "hyperbolic";
  }
  return "unknown";
}

ComponentKind classify(long betti) noexcept {
  if (betti <= 0) return ComponentKind::Trivial;
  if (betti == 1) return ComponentKind::SingleCycle;
  return ComponentKind::Hyperbolic;
}

std::vector<ComponentKind> Reduction::kinds() const {
  std::vector<ComponentKind> k;
  k.reserve(components.size());
  for (const auto& c : components) k.push_back(c.kind);
  return k;
}

namespace {

struct WorkEdge {
  VertexId a;
  VertexId b;
  double length;
  bool alive;
};

}  // namespace

Reduction reduce(const MetricGraph& graph) {
  const std::size_t n = graph.vertex_count();
  std::vector<WorkEdge> edges;
  std::vector<std::vector<std::size_t>> incident(n);
  for (const Edge& e : graph.edges()) {
    incident[e.u].push_back(edges.size());
    if (e.v != e.u) incident[e.v].push_back(edges.size());
    edges.push_back({e.u, e.v, e.length, true});
  }

  std::vector<char> removed(n, 0);
  std::deque<VertexId> queue;
  for (VertexId v = 0; v < n; ++v) queue.push_back(v);

  std::vector<std::size_t> live;
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    if (removed[v]) continue;

    live.clear();
    std::size_t degree = 0;
    for (std::size_t e : incident[v]) {
      if (!edges[e].alive) continue;
      live.push_back(e);
      degree += edges[e].a == edges[e].b ? 2 : 1;
    }
    auto other = [&](std::size_t e) { return edges[e].a == v ? edges[e].b : edges[e].a; };

    if (degree == 1) {
      edges[live[0]].alive = false;
      removed[v] = 1;
      queue.push_back(other(live[0]));
    } else if (degree == 2 && live.size() == 2) {
      // A vertex carrying only a loop is the single-cycle normal form; keep it.
      const VertexId a = other(live[0]);
      const VertexId b = other(live[1]);
      const double length = edges[live[0]].length + edges[live[1]].length;
      edges[live[0]].alive = false;
      edges[live[1]].alive = false;
      removed[v] = 1;
      const std::size_t merged = edges.size();
      edges.push_back({a, b, length, true});
      incident[a].push_back(merged);
      if (b != a) incident[b].push_back(merged);
      queue.push_back(a);
      queue.push_back(b);
    }
  }

  const auto label = component_labels(graph);
  const auto betti = first_betti(graph);

  Reduction result;
  result.components.resize(betti.size());
  GraphBuilder all;
  for (std::size_t c = 0; c < betti.size(); ++c) {
    ReducedComponent& rc = result.components[c];
    rc.betti = betti[c];
    rc.kind = classify(betti[c]);
    if (rc.kind == ComponentKind::Trivial) continue;

    GraphBuilder builder;
    std::vector<std::size_t> local(n, 0);
    std::vector<std::size_t> global(n, 0);
    for (VertexId v = 0; v < n; ++v) {
      if (label[v] != c || removed[v]) continue;
      local[v] = builder.add_vertex(graph.name(v));
      global[v] = all.add_vertex(graph.name(v));
      rc.to_original.push_back(v);
      result.to_original.push_back(v);
    }
    for (const WorkEdge& e : edges) {
      if (!e.alive || label[e.a] != c) continue;
      builder.add_edge(local[e.a], local[e.b], e.length);
      all.add_edge(global[e.a], global[e.b], e.length);
    }
    rc.graph = builder.build();
  }
  result.graph = all.build();
  return result;
}

// ---------------------------------------------------------------------------
// Editing

MetricGraph add_edge(const MetricGraph& graph, VertexId x, VertexId y, double l0) {
  if (x >= graph.vertex_count() || y >= graph.vertex_count()) {
    throw Error(ErrorCode::UnknownVertex, "add_edge endpoint out of range");
  }
  GraphBuilder builder(graph);
  builder.add_edge(x, y, l0);
  return builder.build();
}

MetricGraph add_vertex(const MetricGraph& graph, std::span<const Attachment> attachments,
                       std::string name) {
  if (attachments.empty()) {
    throw Error(ErrorCode::EmptyAttachments, "add_vertex needs at least one attachment");
  }
  for (const Attachment& a : attachments) {
    if (a.vertex >= graph.vertex_count()) {
      throw Error(ErrorCode::UnknownVertex, "attachment vertex out of range");
    }
  }
  if (name.empty()) {
    std::size_t k = graph.vertex_count();
    do {
      name = "new" + std::to_string(k++);
    } while (graph.find(name));
  }
  GraphBuilder builder(graph);
  const VertexId v0 = builder.add_vertex(std::move(name));
  for (const Attachment& a : attachments) builder.add_edge(v0, a.vertex, a.length);
  return builder.build();
}

MetricGraph remove_edge(const MetricGraph& graph, DartId d) {
  if (d >= graph.dart_count()) {
    throw Error(ErrorCode::InvalidDartIndex, "dart " + std::to_string(d) + " out of range");
  }
  const DartId lo = std::min(d, graph.dart(d).reverse);
  return filter_edges(graph, [lo](const Edge& e) { return e.dart != lo; });
}

MetricGraph detach_vertex(const MetricGraph& graph, VertexId v) {
  if (v >= graph.vertex_count()) {
    throw Error(ErrorCode::UnknownVertex, "vertex index out of range");
  }
  return filter_edges(graph, [v](const Edge& e) { return e.u != v && e.v != v; });
}

bool equivalent(const MetricGraph& a, const MetricGraph& b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  std::vector<std::string> na(a.names().begin(), a.names().end());
  std::vector<std::string> nb(b.names().begin(), b.names().end());
  std::sort(na.begin(), na.end());
  std::sort(nb.begin(), nb.end());
  if (na != nb) return false;

  using Key = std::tuple<std::string, std::string, double>;
  auto keys = [](const MetricGraph& g) {
    std::vector<Key> out;
    for (const Edge& e : g.edges()) {
      std::string x = g.name(e.u);
      std::string y = g.name(e.v);
      if (y < x) std::swap(x, y);
      out.emplace_back(std::move(x), std::move(y), e.length);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  return keys(a) == keys(b);
}

}  // namespace entrograph
