#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's solvers: enumeration is breadth-first over explicit dart lists,
// spectral radii come from Eigen's dense eigensolver, roots from bisection.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entrograph/generate.hpp"
#include "entrograph/graph.hpp"
#include "entrograph/spectral.hpp"

namespace oracle {

using entrograph::DartId;
using entrograph::GraphBuilder;
using entrograph::MetricGraph;
using entrograph::VertexId;

enum class Walks { NonBacktracking, Backtracking };
enum class Select { FromX, ToY, Closed, Primitive };

struct Found {
  double length;
  DartId first;
  DartId last;
};

/// Breadth-first enumeration of dart sequences starting at x with total
/// length strictly below r. `Primitive` stops extending once a walk is back
/// at x; the other selections keep going.
inline std::vector<Found> walks(const MetricGraph& g, VertexId x, double r, Walks mode,
                                Select select, VertexId y = 0) {
  struct State {
    DartId first;
    DartId last;
    double length;
  };
  std::vector<std::vector<DartId>> out(g.vertex_count());
  for (DartId d = 0; d < g.dart_count(); ++d) out[g.dart(d).tail].push_back(d);

  std::vector<Found> found;
  std::deque<State> queue;
  for (DartId d : out[x]) {
    if (g.dart(d).length < r) queue.push_back({d, d, g.dart(d).length});
  }
  while (!queue.empty()) {
    const State s = queue.front();
    queue.pop_front();
    const VertexId head = g.dart(s.last).head;
    bool take = false;
    switch (select) {
      case Select::FromX: take = true; break;
      case Select::ToY: take = head == y; break;
      case Select::Closed:
      case Select::Primitive: take = head == x; break;
    }
    if (take) found.push_back({s.length, s.first, s.last});
    if (select == Select::Primitive && head == x) continue;
    for (DartId d : out[head]) {
      if (mode == Walks::NonBacktracking && d == g.dart(s.last).reverse) continue;
      const double l = s.length + g.dart(d).length;
      if (l < r) queue.push_back({s.first, d, l});
    }
  }
  return found;
}

inline std::vector<double> lengths(const std::vector<Found>& found) {
  std::vector<double> out;
  out.reserve(found.size());
  for (const Found& f : found) out.push_back(f.length);
  std::sort(out.begin(), out.end());
  return out;
}

/// Dart transfer matrix built from scratch: (d, e) entry e^{-t l(e)} when e
/// may follow d.
inline Eigen::MatrixXd transfer(const MetricGraph& g, double t, Walks mode) {
  const std::size_t n = g.dart_count();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (DartId d = 0; d < n; ++d) {
    for (DartId e = 0; e < n; ++e) {
      if (g.dart(e).tail != g.dart(d).head) continue;
      if (mode == Walks::NonBacktracking && e == g.dart(d).reverse) continue;
      m(d, e) = std::exp(-t * g.dart(e).length);
    }
  }
  return m;
}

inline double spectral_radius(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Bisection root of an increasing function on [lo, hi].
inline double bisect(const std::function<double(double)>& fn, double lo, double hi,
                     int steps = 200) {
  for (int k = 0; k < steps && hi - lo > 1e-15 * std::max(1.0, hi); ++k) {
    const double mid = 0.5 * (lo + hi);
    (fn(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Growth rate from the dense eigensolver: root of rho(B(t)) = 1, 0 if none.
inline double entropy(const MetricGraph& g, Walks mode = Walks::NonBacktracking) {
  if (g.dart_count() == 0) return 0.0;
  auto excess = [&](double t) { return std::log(spectral_radius(transfer(g, t, mode))); };
  if (!(excess(0.0) > 1e-12)) return 0.0;
  double hi = 1.0;
  while (excess(hi) > 0.0) hi *= 2.0;
  return bisect([&](double t) { return -excess(t); }, 0.0, hi);
}

/// Sum of e^{-t l} over a length list.
inline double laplace_sum(const std::vector<double>& ls, double t) {
  long double s = 0.0L;
  for (auto it = ls.rbegin(); it != ls.rend(); ++it) s += std::exp(-static_cast<long double>(t) * *it);
  return static_cast<double>(s);
}

// ---------------------------------------------------------------------------
// Suite graphs

inline MetricGraph rose(int k, double length = 1.0) {
  GraphBuilder b;
  const VertexId x = b.add_vertex("x");
  for (int i = 0; i < k; ++i) b.add_edge(x, x, length);
  return b.build();
}

inline MetricGraph theta(double a = 1.0, double b = 1.0, double c = 1.0) {
  GraphBuilder g;
  const VertexId u = g.add_vertex("u");
  const VertexId v = g.add_vertex("v");
  g.add_edge(u, v, a);
  g.add_edge(u, v, b);
  g.add_edge(u, v, c);
  return g.build();
}

inline MetricGraph complete4(double length = 1.0) {
  GraphBuilder b;
  for (int i = 0; i < 4; ++i) b.add_vertex(std::to_string(i));
  for (VertexId i = 0; i < 4; ++i) {
    for (VertexId j = i + 1; j < 4; ++j) b.add_edge(i, j, length);
  }
  return b.build();
}

/// Cycle a-b-c-d with unit sides.
inline MetricGraph square() {
  GraphBuilder b;
  for (const char* n : {"a", "b", "c", "d"}) b.add_vertex(n);
  for (VertexId i = 0; i < 4; ++i) b.add_edge(i, (i + 1) % 4, 1.0);
  return b.build();
}

inline MetricGraph path(std::size_t vertices, double length = 1.0) {
  GraphBuilder b;
  for (std::size_t i = 0; i < vertices; ++i) b.add_vertex("p" + std::to_string(i));
  for (VertexId i = 0; i + 1 < vertices; ++i) b.add_edge(i, i + 1, length);
  return b.build();
}

/// K4 with incommensurable lengths and a pendant path hung off one vertex.
inline MetricGraph irregular() {
  GraphBuilder b;
  for (int i = 0; i < 6; ++i) b.add_vertex("w" + std::to_string(i));
  b.add_edge(0, 1, 1.0);
  b.add_edge(0, 2, std::sqrt(2.0));
  b.add_edge(0, 3, std::numbers::pi / 3.0);
  b.add_edge(1, 2, std::exp(0.2));
  b.add_edge(1, 3, 1.3);
  b.add_edge(2, 3, std::sqrt(3.0) - 0.5);
  b.add_edge(3, 4, 0.7);
  b.add_edge(4, 5, 0.4);
  return b.build();
}

/// Two unit loops at x joined by a bridge of length 1/2 to a unit loop at y.
inline MetricGraph dumbbell() {
  GraphBuilder b;
  const VertexId x = b.add_vertex("x");
  const VertexId y = b.add_vertex("y");
  b.add_edge(x, x, 1.0);
  b.add_edge(x, x, 1.0);
  b.add_edge(x, y, 0.5);
  b.add_edge(y, y, 1.0);
  return b.build();
}

inline MetricGraph scaled(const MetricGraph& g, double s) {
  GraphBuilder b;
  for (const auto& n : g.names()) b.add_vertex(n);
  for (const auto& e : g.edges()) b.add_edge(e.u, e.v, s * e.length);
  return b.build();
}

/// Replaces every edge by a chain of `pieces` edges through new degree-2
/// vertices; the total length is unchanged.
inline MetricGraph subdivided(const MetricGraph& g, int pieces) {
  GraphBuilder b;
  for (const auto& n : g.names()) b.add_vertex(n);
  std::size_t fresh = 0;
  for (const auto& e : g.edges()) {
    VertexId prev = e.u;
    for (int k = 1; k < pieces; ++k) {
      const VertexId mid = b.add_vertex("sub" + std::to_string(fresh++));
      b.add_edge(prev, mid, e.length / pieces);
      prev = mid;
    }
    b.add_edge(prev, e.v, e.length / pieces);
  }
  return b.build();
}

// ---------------------------------------------------------------------------
// Seeded generators, independent of generate_graph

/// Connected multigraph with first Betti number >= 2: a random tree plus
/// extra edges, lengths uniform on [lo, hi]. Loops allowed when asked.
inline MetricGraph random_hyperbolic(std::uint64_t seed, std::size_t vertices, std::size_t edges,
                                     double lo = 0.5, double hi = 2.5, bool loops = false) {
  entrograph::Rng rng(seed * 0x9E3779B97F4A7C15ULL + 17);
  GraphBuilder b;
  for (std::size_t i = 0; i < vertices; ++i) b.add_vertex("n" + std::to_string(i));
  for (VertexId i = 1; i < vertices; ++i) {
    b.add_edge(static_cast<VertexId>(rng.below(i)), i, rng.uniform(lo, hi));
  }
  std::size_t have = vertices - 1;
  while (have < std::max(edges, vertices + 1)) {
    const VertexId u = rng.below(vertices);
    const VertexId v = rng.below(vertices);
    if (u == v && !loops) continue;
    b.add_edge(u, v, rng.uniform(lo, hi));
    ++have;
  }
  return b.build();
}

/// Smallest positive root of 2u^5 + u^4 + 2u^3 = 1.
inline double square_chord_root() {
  auto p = [](double u) { return 2 * std::pow(u, 5) + std::pow(u, 4) + 2 * std::pow(u, 3) - 1.0; };
  return bisect(p, 0.0, 1.0);
}

}  // namespace oracle
