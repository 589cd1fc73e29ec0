#include "entrograph/genfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "entrograph/error.hpp"

namespace entrograph {

const char* to_string(GenFunStatus status) noexcept {
  switch (status) {
    case GenFunStatus::Converged: return "converged";
    case GenFunStatus::Divergent: return "divergent";
    case GenFunStatus::Disconnected: return "disconnected";
  }
  return "unknown";
}

double GenFunValue::require() const {
  if (status == GenFunStatus::Divergent) {
    std::ostringstream os;
    os << "generating function diverges at t = " << t;
    throw Error(ErrorCode::DivergentSeries, os.str());
  }
  return value;
}

// ---------------------------------------------------------------------------
// PathSeries

PathSeries::PathSeries(const MetricGraph& graph, double t, const GenFunOptions& options)
    : graph_(graph), t_(t) {
  if (graph.dart_count() == 0) {
    empty_ = true;
    return;
  }
  const Eigen::MatrixXd b = build_transfer(graph, t).matrix;
  SpectralOptions so = options.spectral;
  so.want_left = false;
  rho_ = spectral_radius(b, so).rho;
  if (rho_ < 1.0 - options.margin) {
    resolvent_.emplace(b, rho_, ResolventOptions{options.margin, options.spectral});
  }
}

void PathSeries::require_convergent() const {
  if (!convergent()) {
    std::ostringstream os;
    os.precision(17);
    os << "path series diverges at t = " << t_ << " (spectral radius " << rho_ << ")";
    throw Error(ErrorCode::DivergentSeries, os.str());
  }
}

Eigen::VectorXd PathSeries::start_weights(VertexId x) const {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(graph_.dart_count()));
  for (DartId d : graph_.out_darts(x)) s[d] = std::exp(-t_ * graph_.dart(d).length);
  return s;
}

double PathSeries::f(VertexId x, VertexId y) const {
  const VertexId xs[1] = {x};
  const VertexId ys[1] = {y};
  return f_matrix(xs, ys)(0, 0);
}

double PathSeries::f_from(VertexId x) const {
  require_convergent();
  if (empty_) return 0.0;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(graph_.dart_count()));
  return start_weights(x).dot(resolvent_->solve(ones));
}

Eigen::MatrixXd PathSeries::f_matrix(std::span<const VertexId> xs,
                                     std::span<const VertexId> ys) const {
  require_convergent();
  const auto nx = static_cast<Eigen::Index>(xs.size());
  const auto ny = static_cast<Eigen::Index>(ys.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(nx, ny);
  if (empty_ || nx == 0 || ny == 0) return out;

  const auto nd = static_cast<Eigen::Index>(graph_.dart_count());
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nd, ny);
  for (Eigen::Index b = 0; b < ny; ++b) {
    for (Eigen::Index d = 0; d < nd; ++d) {
      if (graph_.dart(static_cast<DartId>(d)).head == ys[b]) rhs(d, b) = 1.0;
    }
  }
  const Eigen::MatrixXd u = resolvent_->solve_many(rhs);
  for (Eigen::Index a = 0; a < nx; ++a) out.row(a) = start_weights(xs[a]).transpose() * u;
  return out;
}

// ---------------------------------------------------------------------------
// Component-level wrappers

namespace {

struct Located {
  Subgraph sub;
  VertexId local = 0;
};

Located component_of(const MetricGraph& graph, VertexId v) {
  Located out;
  out.sub = component_containing(graph, v);
  out.local = local_vertex(out.sub, v);
  return out;
}

void check_vertex(const MetricGraph& graph, VertexId v) {
  if (v >= graph.vertex_count()) {
    throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(v) + " out of range");
  }
}

}  // namespace

GenFunValue f_path(const MetricGraph& graph, VertexId x, VertexId y, double t,
                   const GenFunOptions& options) {
  check_vertex(graph, x);
  check_vertex(graph, y);
  GenFunValue out;
  out.kind = GenFunKind::PathXY;
  out.t = t;
  out.x = x;
  out.y = y;
  const Located loc = component_of(graph, x);
  if (!std::binary_search(loc.sub.to_parent.begin(), loc.sub.to_parent.end(), y)) {
    out.status = GenFunStatus::Disconnected;
    return out;
  }
  const PathSeries series(loc.sub.graph, t, options);
  if (!series.convergent()) {
    out.status = GenFunStatus::Divergent;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  out.value = series.f(loc.local, local_vertex(loc.sub, y));
  return out;
}

GenFunValue f_from(const MetricGraph& graph, VertexId x, double t, const GenFunOptions& options) {
  check_vertex(graph, x);
  GenFunValue out;
  out.kind = GenFunKind::PathFromX;
  out.t = t;
  out.x = x;
  const Located loc = component_of(graph, x);
  const PathSeries series(loc.sub.graph, t, options);
  if (!series.convergent()) {
    out.status = GenFunStatus::Divergent;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  out.value = series.f_from(loc.local);
  return out;
}

std::optional<Eigen::MatrixXd> primitive_matrix(const MetricGraph& graph, VertexId v, double t,
                                                const GenFunOptions& options) {
  check_vertex(graph, v);
  const Located loc = component_of(graph, v);
  const MetricGraph& c = loc.sub.graph;
  const VertexId vc = loc.local;
  const auto out = c.out_darts(vc);
  const auto n = static_cast<Eigen::Index>(out.size());

  // Distinct far endpoints of the non-loop attachment darts.
  std::vector<VertexId> ends;
  for (DartId d : out) {
    if (c.dart(d).head != vc) ends.push_back(c.dart(d).head);
  }
  std::sort(ends.begin(), ends.end());
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
  auto slot = [&](VertexId w) {
    return static_cast<Eigen::Index>(std::lower_bound(ends.begin(), ends.end(), w) - ends.begin());
  };

  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ends.size()),
                                            static_cast<Eigen::Index>(ends.size()));
  if (!ends.empty()) {
    const MetricGraph rest = detach_vertex(c, vc);
    const PathSeries series(rest, t, options);
    if (!series.convergent()) return std::nullopt;
    f = series.f_matrix(ends, ends);
  }

  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Dart& ei = c.dart(out[i]);
    for (Eigen::Index j = 0; j < n; ++j) {
      const Dart& ej = c.dart(out[j]);
      const bool loop_i = ei.head == vc;
      const bool loop_j = ej.head == vc;
      if (loop_i || loop_j) {
        // A loop is a primitive cycle by itself, returning along its reverse.
        if (loop_i && out[j] == ei.reverse) g(i, j) = std::exp(-ei.length * t);
        continue;
      }
      double inner = f(slot(ei.head), slot(ej.head));
      if (ei.head == ej.head && i != j) inner += 1.0;  // empty interior
      g(i, j) = std::exp(-(ei.length + ej.length) * t) * inner;
    }
  }
  return g;
}

GenFunValue g_primitive(const MetricGraph& graph, VertexId v, std::size_t i, std::size_t j,
                        double t, const GenFunOptions& options) {
  check_vertex(graph, v);
  const std::size_t n = graph.degree(v);
  if (i >= n || j >= n) {
    std::ostringstream os;
    os << "attachment index (" << i << ", " << j << ") out of range for degree " << n;
    throw Error(ErrorCode::InvalidDartIndex, os.str());
  }
  GenFunValue out;
  out.kind = GenFunKind::PrimitiveIJ;
  out.t = t;
  out.x = out.y = v;
  out.i = i;
  out.j = j;
  const auto g = primitive_matrix(graph, v, t, options);
  if (!g) {
    out.status = GenFunStatus::Divergent;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  out.value = (*g)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return out;
}

GenFunValue first_return_series(const MetricGraph& graph, VertexId v, double t, WalkMode mode,
                                const GenFunOptions& options) {
  check_vertex(graph, v);
  GenFunValue out;
  out.kind = GenFunKind::PrimitiveIJ;
  out.t = t;
  out.x = out.y = v;
  const Located loc = component_of(graph, v);
  const MetricGraph& c = loc.sub.graph;
  const VertexId vc = loc.local;
  if (c.dart_count() == 0) return out;

  TransferPattern pattern = transfer_pattern(c, mode);
  std::erase_if(pattern.transitions,
                [&](const auto& tr) { return c.dart(tr.first).head == vc; });
  const Eigen::MatrixXd m = pattern.at(t);
  const auto nd = static_cast<Eigen::Index>(c.dart_count());
  Eigen::VectorXd s = Eigen::VectorXd::Zero(nd);
  Eigen::VectorXd tau = Eigen::VectorXd::Zero(nd);
  for (Eigen::Index d = 0; d < nd; ++d) {
    const Dart& dd = c.dart(static_cast<DartId>(d));
    if (dd.tail == vc) s[d] = std::exp(-t * dd.length);
    if (dd.head == vc) tau[d] = 1.0;
  }
  try {
    const Resolvent res(m, ResolventOptions{options.margin, options.spectral});
    out.value = s.dot(res.solve(tau));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DivergentSeries) throw;
    out.status = GenFunStatus::Divergent;
    out.value = std::numeric_limits<double>::infinity();
  }
  return out;
}

double check_symmetry(const MetricGraph& graph, VertexId x, VertexId y, double t,
                      const GenFunOptions& options) {
  const double a = f_path(graph, x, y, t, options).require();
  const double b = f_path(graph, y, x, t, options).require();
  return std::abs(a - b);
}

}  // namespace entrograph
