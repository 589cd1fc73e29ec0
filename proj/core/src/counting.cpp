#include "entrograph/counting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>

#include "entrograph/entropy.hpp"
#include "entrograph/error.hpp"
#include "entrograph/genfun.hpp"
#include "entrograph/parallel.hpp"

namespace entrograph {

namespace {

constexpr std::uint32_t kNoIndex = std::numeric_limits<std::uint32_t>::max();

bool is_cycle_kind(CountKind kind) {
  return kind == CountKind::CyclesAtV || kind == CountKind::PrimitiveCyclesAtV;
}

struct LocalRecords {
  std::vector<double> lengths;
  std::vector<std::uint32_t> first;
  std::vector<std::uint32_t> last;
};

struct Frame {
  DartId dart;
  double length;
  std::size_t cursor;
  std::size_t end;
};

/// Transitions of the walk selected by `spec`; primitive walks stop on
/// reaching the source.
TransferPattern walk_pattern(const MetricGraph& graph, CountKind kind, WalkMode mode,
                             VertexId source) {
  TransferPattern p = transfer_pattern(graph, mode);
  if (kind == CountKind::PrimitiveCyclesAtV) {
    std::erase_if(p.transitions,
                  [&](const auto& tr) { return graph.dart(tr.first).head == source; });
  }
  return p;
}

void check_spec(const MetricGraph& graph, const EnumerationSpec& spec) {
  if (spec.source >= graph.vertex_count() ||
      (spec.kind == CountKind::PathsXY && spec.target >= graph.vertex_count())) {
    throw Error(ErrorCode::UnknownVertex, "enumeration endpoint out of range");
  }
}

}  // namespace

CountProfile enumerate(const MetricGraph& graph, const EnumerationSpec& spec) {
  check_spec(graph, spec);
  if (!(spec.horizon > 0.0) || !std::isfinite(spec.horizon)) {
    throw Error(ErrorCode::Precondition, "enumeration horizon must be positive and finite");
  }
  const double horizon = spec.horizon;
  const VertexId source = spec.source;

  const TransferPattern pattern = walk_pattern(graph, spec.kind, spec.mode, source);
  std::vector<std::size_t> offset;
  std::vector<DartId> succ;
  pattern.successors(offset, succ);
  // Successors sorted by length let the search stop at the first overshoot.
  for (std::size_t d = 0; d < pattern.size; ++d) {
    std::stable_sort(succ.begin() + static_cast<std::ptrdiff_t>(offset[d]),
                     succ.begin() + static_cast<std::ptrdiff_t>(offset[d + 1]),
                     [&](DartId a, DartId b) { return pattern.length[a] < pattern.length[b]; });
  }

  const auto starts = graph.out_darts(source);
  std::vector<std::uint32_t> position(graph.dart_count(), kNoIndex);
  for (std::size_t i = 0; i < starts.size(); ++i) position[starts[i]] = static_cast<std::uint32_t>(i);

  std::atomic<std::size_t> visits{0};
  std::atomic<bool> over{false};
  std::vector<LocalRecords> local(starts.size());
  const bool cycles = is_cycle_kind(spec.kind);
  const bool primitive = spec.kind == CountKind::PrimitiveCyclesAtV;

  parallel_for(starts.size(), [&](std::size_t si) {
    LocalRecords& rec = local[si];
    const DartId d0 = starts[si];
    const std::uint32_t first = static_cast<std::uint32_t>(si);
    std::size_t pending = 0;
    auto flush = [&] {
      if (visits.fetch_add(pending) + pending > spec.cap) over.store(true);
      pending = 0;
    };
    auto record = [&](DartId e, double len) {
      const Dart& de = graph.dart(e);
      switch (spec.kind) {
        case CountKind::PathsFromX:
          rec.lengths.push_back(len);
          break;
        case CountKind::PathsXY:
          if (de.head == spec.target) rec.lengths.push_back(len);
          break;
        default:
          if (de.head == source) {
            rec.lengths.push_back(len);
            rec.first.push_back(first);
            rec.last.push_back(position[de.reverse]);
          }
      }
    };
    auto extends = [&](DartId e) { return !primitive || graph.dart(e).head != source; };

    const double l0 = pattern.length[d0];
    if (!(l0 < horizon)) return;
    ++pending;
    record(d0, l0);
    std::vector<Frame> stack;
    if (extends(d0)) stack.push_back({d0, l0, offset[d0], offset[d0 + 1]});
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.cursor == f.end) {
        stack.pop_back();
        continue;
      }
      const DartId e = succ[f.cursor++];
      const double len = f.length + pattern.length[e];
      if (!(len < horizon)) {
        f.cursor = f.end;
        continue;
      }
      if (++pending >= 4096) {
        flush();
        if (over.load(std::memory_order_relaxed)) return;
      }
      record(e, len);
      if (extends(e)) stack.push_back({e, len, offset[e], offset[e + 1]});
    }
    flush();
  });

  if (over.load() || visits.load() > spec.cap) {
    throw HorizonError(horizon, safe_horizon(graph, spec), spec.cap);
  }

  CountProfile out;
  out.kind = spec.kind;
  out.mode = spec.mode;
  out.horizon = horizon;
  out.source = source;
  out.target = spec.kind == CountKind::PathsXY ? spec.target : source;
  std::size_t total = 0;
  for (const auto& r : local) total += r.lengths.size();

  if (!cycles) {
    out.lengths.reserve(total);
    for (const auto& r : local) out.lengths.insert(out.lengths.end(), r.lengths.begin(), r.lengths.end());
    std::sort(out.lengths.begin(), out.lengths.end());
    return out;
  }

  struct Entry {
    double length;
    std::uint32_t first;
    std::uint32_t last;
  };
  std::vector<Entry> all;
  all.reserve(total);
  for (const auto& r : local) {
    for (std::size_t k = 0; k < r.lengths.size(); ++k) all.push_back({r.lengths[k], r.first[k], r.last[k]});
  }
  std::sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) {
    if (a.length != b.length) return a.length < b.length;
    if (a.first != b.first) return a.first < b.first;
    return a.last < b.last;
  });
  out.lengths.reserve(total);
  out.first.reserve(total);
  out.last.reserve(total);
  for (const Entry& e : all) {
    out.lengths.push_back(e.length);
    out.first.push_back(e.first);
    out.last.push_back(e.last);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Safe horizon

double safe_horizon(const MetricGraph& graph, const EnumerationSpec& spec) {
  check_spec(graph, spec);
  const Subgraph comp = component_containing(graph, spec.source);
  const MetricGraph& c = comp.graph;
  const VertexId x = local_vertex(comp, spec.source);
  if (c.dart_count() == 0) return std::numeric_limits<double>::infinity();

  const TransferPattern pattern = walk_pattern(c, spec.kind, spec.mode, x);
  const auto nd = static_cast<Eigen::Index>(c.dart_count());
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(nd);
  const double log_cap = std::log(static_cast<double>(spec.cap));

  // F(t) = sum over all visited prefixes of e^{-t l}.
  auto visits_series = [&](double t) -> std::optional<double> {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(nd);
    for (DartId d : c.out_darts(x)) s[static_cast<Eigen::Index>(d)] = std::exp(-t * c.dart(d).length);
    try {
      const Resolvent res(pattern.at(t), ResolventOptions{1e-9, {}});
      return s.dot(res.solve(ones));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DivergentSeries) throw;
      return std::nullopt;
    }
  };

  SpectralOptions so;
  so.want_left = false;
  double growth = 0.0;
  if (spectral_radius(pattern.at(0.0), so).rho < 0.5) {
    // Finitely many walks.
    const auto total = visits_series(0.0);
    if (total && *total <= static_cast<double>(spec.cap)) {
      return std::numeric_limits<double>::infinity();
    }
  } else {
    std::size_t max_succ = 2;
    std::vector<std::size_t> offset;
    std::vector<DartId> succ;
    pattern.successors(offset, succ);
    for (std::size_t d = 0; d < pattern.size; ++d) max_succ = std::max(max_succ, offset[d + 1] - offset[d]);
    double hi = std::log(static_cast<double>(max_succ)) / c.min_length();
    for (int k = 0; spectral_radius(pattern.at(hi), so).rho > 1.0 && k < 60; ++k) hi *= 2.0;
    if (spectral_radius(pattern.at(0.0), so).rho > 1.0) {
      growth = unit_radius_root(pattern, 0.0, hi).t;
    }
  }

  double mean = 0.0;
  for (const Dart& d : c.darts()) mean += d.length;
  mean /= static_cast<double>(c.dart_count());
  const double scale = std::max(growth, 1.0 / mean);
  double best = 0.0;
  constexpr int kSteps = 64;
  for (int k = 0; k <= kSteps; ++k) {
    const double t = growth + scale * std::pow(10.0, -5.0 + 6.0 * k / kSteps);
    const auto f = visits_series(t);
    if (!f || !(*f > 0.0)) continue;
    best = std::max(best, (log_cap - std::log(*f)) / t);
  }
  return best;
}

std::optional<double> path_count_constant(const MetricGraph& graph, VertexId x, double h) {
  const Subgraph comp = component_containing(graph, x);
  const MetricGraph& c = comp.graph;
  const VertexId xl = local_vertex(comp, x);
  for (VertexId v = 0; v < c.vertex_count(); ++v) {
    if (c.degree(v) < 3) return std::nullopt;
  }
  const Eigen::MatrixXd b = build_transfer(c, h).matrix;
  SpectralOptions so;
  so.want_left = false;
  const PerronData pd = spectral_radius(b, so);
  // Every dart of the component must carry weight, and B(h) must not expand.
  if (!(pd.upper <= 1.0) || !(pd.right.minCoeff() > 0.0)) return std::nullopt;

  std::size_t min_succ = std::numeric_limits<std::size_t>::max();
  for (const Dart& d : c.darts()) min_succ = std::min(min_succ, c.degree(d.head) - 1);
  const double beta = 1.0 / static_cast<double>(min_succ - 1);

  Eigen::VectorXd u(pd.right.size());
  for (Eigen::Index d = 0; d < u.size(); ++d) {
    u[d] = std::exp(-h * c.dart(static_cast<DartId>(d)).length) * pd.right[d];
  }
  const double k = beta / u.minCoeff();
  double sum = 0.0;
  for (DartId d : c.out_darts(xl)) sum += u[static_cast<Eigen::Index>(d)];
  return k * sum;
}

// ---------------------------------------------------------------------------
// Laplace identity

LaplaceReport laplace_check(const CountProfile& profile, const MetricGraph& graph, double t,
                            const LaplaceOptions& options) {
  if (profile.mode != WalkMode::NonBacktracking) {
    throw Error(ErrorCode::Precondition, "laplace_check needs a non-backtracking profile");
  }
  const Subgraph comp = component_containing(graph, profile.source);
  const MetricGraph& c = comp.graph;
  const VertexId x = local_vertex(comp, profile.source);

  LaplaceReport rep;
  rep.t = t;
  rep.horizon = profile.horizon;
  rep.h = volume_entropy(c).h;
  if (t < rep.h + options.margin) {
    std::ostringstream os;
    os << "t = " << t << " is closer than " << options.margin << " to the entropy " << rep.h;
    throw Error(ErrorCode::MarginTooSmall, os.str());
  }

  switch (profile.kind) {
    case CountKind::PathsXY:
      rep.f_value = f_path(c, x, local_vertex(comp, profile.target), t).require();
      break;
    case CountKind::PathsFromX:
      rep.f_value = f_from(c, x, t).require();
      break;
    case CountKind::CyclesAtV:
      rep.f_value = f_path(c, x, x, t).require();
      break;
    case CountKind::PrimitiveCyclesAtV:
      rep.f_value = first_return_series(c, x, t, WalkMode::NonBacktracking).require();
      break;
  }

  // Each path of length l < R contributes t * int_l^R e^{-tr} dr.
  const double R = profile.horizon;
  const double er = std::exp(-t * R);
  // Grouped by distinct length, smallest terms first, Neumaier-compensated:
  // profiles hold millions of terms and the bracket can be narrower than the
  // naive rounding error.
  double truncated = 0.0;
  double carry = 0.0;
  const auto& ls = profile.lengths;
  for (std::size_t hi = ls.size(); hi > 0;) {
    std::size_t lo = hi - 1;
    while (lo > 0 && ls[lo - 1] == ls[hi - 1]) --lo;
    const double term = static_cast<double>(hi - lo) * (std::exp(-t * ls[lo]) - er);
    const double sum = truncated + term;
    carry += std::abs(truncated) >= std::abs(term) ? (truncated - sum) + term : (term - sum) + truncated;
    truncated = sum;
    hi = lo;
  }
  truncated += carry;
  rep.truncated = truncated;

  // Tail bounds. All profile kinds count a subset of the paths from x.
  double tail = std::numeric_limits<double>::infinity();
  const double hb = rep.h + 1e-8;
  if (rep.h > 0.0) {
    if (const auto m = path_count_constant(c, x, hb)) {
      tail = std::min(tail, t * *m * std::exp((hb - t) * R) / (t - hb));
    }
  }
  // N(r) <= f_x(s) e^{sr} for any s above the entropy.
  for (int k = 1; k < 32; ++k) {
    const double s = rep.h + (t - rep.h) * k / 32.0;
    const GenFunValue fs = f_from(c, x, s);
    if (!fs.finite()) continue;
    tail = std::min(tail, t * fs.value * std::exp((s - t) * R) / (t - s));
  }
  rep.tail_upper = tail;
  rep.lower = truncated;
  rep.upper = truncated + tail;
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, rep.f_value);
  rep.inside = rep.f_value >= rep.lower - slack && rep.f_value <= rep.upper + slack;
  return rep;
}

// ---------------------------------------------------------------------------
// Recursions

bool RecursionReport::ok() const noexcept {
  if (nb_mismatches != 0) return false;
  for (const auto& p : backtracking) if (!p.ok()) return false;
  for (const auto& p : non_backtracking) if (!p.ok()) return false;
  return true;
}

namespace {

std::size_t below(const std::vector<double>& sorted, double r) {
  return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), r) - sorted.begin());
}

}  // namespace

RecursionReport verify_recursions(const MetricGraph& graph, VertexId v,
                                  const std::vector<double>& r_grid, std::size_t cap) {
  RecursionReport rep;
  if (r_grid.empty()) return rep;
  const double R = *std::max_element(r_grid.begin(), r_grid.end());
  EnumerationSpec spec;
  spec.source = v;
  spec.horizon = R;
  spec.cap = cap;

  // Backtracking: N_v(r) = k + sum_i N_v(r - l_i).
  spec.mode = WalkMode::Backtracking;
  spec.kind = CountKind::CyclesAtV;
  const CountProfile bt_cycles = enumerate(graph, spec);
  spec.kind = CountKind::PrimitiveCyclesAtV;
  const CountProfile bt_prim = enumerate(graph, spec);
  for (double r : r_grid) {
    RecursionPoint p;
    p.r = r;
    p.lhs = static_cast<long long>(bt_cycles.count_below(r));
    for (double l : bt_prim.lengths) {
      if (!(l < r)) break;
      p.rhs += 1 + static_cast<long long>(bt_cycles.count_below(r - l));
    }
    rep.backtracking.push_back(p);
  }

  // Non-backtracking, per initial dart.
  spec.mode = WalkMode::NonBacktracking;
  spec.kind = CountKind::CyclesAtV;
  const CountProfile nb_cycles = enumerate(graph, spec);
  spec.kind = CountKind::PrimitiveCyclesAtV;
  const CountProfile nb_prim = enumerate(graph, spec);
  const std::size_t n = graph.degree(v);
  std::vector<std::vector<double>> by_first(n);
  for (std::size_t k = 0; k < nb_cycles.size(); ++k) by_first[nb_cycles.first[k]].push_back(nb_cycles.lengths[k]);

  for (double r : r_grid) {
    std::vector<long long> lhs(n, 0), rhs(n, 0);
    for (std::size_t i = 0; i < n; ++i) lhs[i] = static_cast<long long>(below(by_first[i], r));
    for (std::size_t m = 0; m < nb_prim.size(); ++m) {
      const double l = nb_prim.lengths[m];
      if (!(l < r)) break;
      const std::size_t i = nb_prim.first[m];
      const std::size_t j = nb_prim.last[m];
      const long long rest = static_cast<long long>(nb_cycles.count_below(r - l)) -
                             static_cast<long long>(below(by_first[j], r - l));
      rhs[i] += 1 + rest;
    }
    RecursionPoint p;
    p.r = r;
    for (std::size_t i = 0; i < n; ++i) {
      p.lhs += lhs[i];
      p.rhs += rhs[i];
      if (lhs[i] != rhs[i]) ++rep.nb_mismatches;
    }
    rep.non_backtracking.push_back(p);
  }
  return rep;
}

std::vector<double> recursion_grid(const MetricGraph& graph, VertexId v, double r_lo, double r_hi,
                                   std::size_t count, std::size_t cap, double min_gap) {
  EnumerationSpec spec;
  spec.kind = CountKind::CyclesAtV;
  spec.mode = WalkMode::Backtracking;  // a superset of the non-backtracking cycles
  spec.source = v;
  spec.horizon = r_hi;
  spec.cap = cap;
  std::vector<double> lengths = enumerate(graph, spec).lengths;
  lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());

  std::vector<double> grid;
  for (std::size_t k = 0; k < count; ++k) {
    double r = r_lo + (r_hi - r_lo) * static_cast<double>(k + 1) / static_cast<double>(count + 1);
    const auto it = std::lower_bound(lengths.begin(), lengths.end(), r);
    const double above = it == lengths.end() ? r_hi : *it;
    const double under = it == lengths.begin() ? 0.0 : *(it - 1);
    if (above - r < min_gap || r - under < min_gap) {
      // Too close to an attained length: use the middle of the nearest wide gap.
      double best = std::numeric_limits<double>::quiet_NaN();
      std::vector<double> edges;
      edges.push_back(0.0);
      edges.insert(edges.end(), lengths.begin(), lengths.end());
      edges.push_back(r_hi);
      for (std::size_t g = 0; g + 1 < edges.size(); ++g) {
        if (edges[g + 1] - edges[g] < 2.0 * min_gap) continue;
        const double mid = 0.5 * (edges[g] + edges[g + 1]);
        if (mid <= r_lo) continue;
        if (std::isnan(best) || std::abs(mid - r) < std::abs(best - r)) best = mid;
      }
      if (std::isnan(best)) continue;
      r = best;
    }
    grid.push_back(r);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

// ---------------------------------------------------------------------------
// Growth bounds

BoundsReport growth_bounds(const MetricGraph& graph, VertexId v, double r_max, std::size_t cap) {
  if (v >= graph.vertex_count()) throw Error(ErrorCode::UnknownVertex, "vertex out of range");
  if (components(graph).size() != 1) {
    throw Error(ErrorCode::Precondition, "growth_bounds needs a connected graph");
  }
  for (VertexId u = 0; u < graph.vertex_count(); ++u) {
    if (graph.degree(u) < 3) {
      throw Error(ErrorCode::Precondition,
                  "growth_bounds needs a reduced graph (vertex '" + graph.name(u) +
                      "' has degree below 3)");
    }
  }
  BoundsReport rep;
  rep.n = graph.degree(v);
  rep.horizon = r_max;
  rep.h = volume_entropy(graph).h;

  const auto g = primitive_matrix(graph, v, rep.h);
  if (!g) throw Error(ErrorCode::DivergentSeries, "primitive series diverge at the entropy");
  const auto n = static_cast<Eigen::Index>(rep.n);
  Eigen::MatrixXd off = Eigen::MatrixXd::Ones(n, n);
  off.diagonal().setZero();
  rep.a = (*g) * off;
  const PerronData pd = spectral_radius(rep.a);
  rep.rho_a = pd.rho;
  rep.w = pd.right;
  const double nn = static_cast<double>(rep.n);
  rep.m_formula = (nn - 1.0) / (nn - 2.0) * rep.w.sum() / rep.w.minCoeff();

  EnumerationSpec spec;
  spec.kind = CountKind::CyclesAtV;
  spec.source = v;
  spec.horizon = r_max;
  spec.cap = cap;
  const CountProfile prof = enumerate(graph, spec);
  const auto& ls = prof.lengths;

  double m_hat = std::numeric_limits<double>::infinity();
  std::size_t k = 0;
  std::size_t event = 0;
  while (k < ls.size()) {
    const double lambda = ls[k];
    std::size_t upto = k;
    while (upto < ls.size() && ls[upto] == lambda) ++upto;
    // On (lambda, next] the count is `upto`; its largest ratio is at lambda+.
    const double bound = rep.m_formula * std::exp(rep.h * lambda);
    if (static_cast<double>(upto) > bound * (1.0 + 1e-9)) {
      rep.violations.push_back({lambda, static_cast<double>(upto), bound});
    }
    if (event > 0) m_hat = std::min(m_hat, static_cast<double>(k) * std::exp(-rep.h * lambda));
    ++event;
    k = upto;
  }
  if (!ls.empty()) m_hat = std::min(m_hat, static_cast<double>(ls.size()) * std::exp(-rep.h * r_max));
  rep.events = event;
  rep.m_empirical = std::isfinite(m_hat) ? m_hat : 0.0;
  return rep;
}

BacktrackingEntropy backtracking_entropy(const MetricGraph& graph, VertexId v, double tol) {
  const Subgraph comp = component_containing(graph, v);
  const MetricGraph& c = comp.graph;
  const VertexId vl = local_vertex(comp, v);
  BacktrackingEntropy out;
  if (c.dart_count() == 0) return out;

  const TransferPattern pattern = transfer_pattern(c, WalkMode::Backtracking);
  SpectralOptions so;
  so.want_left = false;
  std::size_t max_degree = 1;
  for (VertexId u = 0; u < c.vertex_count(); ++u) max_degree = std::max(max_degree, c.degree(u));
  double hi = std::log(static_cast<double>(std::max<std::size_t>(max_degree, 2))) / c.min_length();
  for (int k = 0; spectral_radius(pattern.at(hi), so).rho > 1.0 && k < 60; ++k) hi *= 2.0;
  if (spectral_radius(pattern.at(0.0), so).rho > 1.0) {
    EntropyOptions eo;
    eo.tol = tol;
    const RootResult root = unit_radius_root(pattern, 0.0, hi, eo);
    out.transfer_root = root.t;
    out.iterations += root.iterations;
  }

  // g(t) >= 1 (or divergent) exactly for t <= h_C.
  auto at_or_below = [&](double t) {
    const GenFunValue g = first_return_series(c, vl, t, WalkMode::Backtracking);
    return !g.finite() || g.value >= 1.0;
  };
  double lo = 0.0;
  double up = std::max(hi, out.transfer_root + 1.0);
  for (int k = 0; at_or_below(up) && k < 60; ++k) up *= 2.0;
  if (!at_or_below(lo)) {
    out.series_root = 0.0;
    return out;
  }
  while (up - lo > tol) {
    const double mid = 0.5 * (lo + up);
    (at_or_below(mid) ? lo : up) = mid;
    ++out.iterations;
    if (up - lo <= 4.0 * std::numeric_limits<double>::epsilon() * up) break;
  }
  out.series_root = 0.5 * (lo + up);
  return out;
}

BacktrackingBounds backtracking_bounds(const MetricGraph& graph, VertexId v, double r_max,
                                       std::size_t cap) {
  if (v >= graph.vertex_count()) throw Error(ErrorCode::UnknownVertex, "vertex out of range");
  if (graph.degree(v) == 0) throw Error(ErrorCode::Precondition, "vertex has no edges");
  BacktrackingBounds rep;
  rep.horizon = r_max;
  rep.h = backtracking_entropy(graph, v).transfer_root;
  rep.l1 = std::numeric_limits<double>::infinity();
  for (DartId d : graph.out_darts(v)) {
    const Dart& dd = graph.dart(d);
    rep.l1 = std::min(rep.l1, dd.head == v ? dd.length : 2.0 * dd.length);
  }
  rep.m_formula = std::max(2.0, 3.0 * std::exp(-rep.h * rep.l1));

  EnumerationSpec spec;
  spec.kind = CountKind::CyclesAtV;
  spec.mode = WalkMode::Backtracking;
  spec.source = v;
  spec.horizon = r_max;
  spec.cap = cap;
  const CountProfile prof = enumerate(graph, spec);
  const auto& ls = prof.lengths;
  std::size_t k = 0;
  while (k < ls.size()) {
    const double lambda = ls[k];
    std::size_t upto = k;
    while (upto < ls.size() && ls[upto] == lambda) ++upto;
    const double bound = rep.m_formula * std::exp(rep.h * lambda) - 1.0;
    if (static_cast<double>(upto) > bound + 1e-9 * (bound + 1.0)) {
      rep.violations.push_back({lambda, static_cast<double>(upto), bound});
    }
    ++rep.events;
    k = upto;
  }
  return rep;
}

std::string profile_csv(const CountProfile& profile) {
  std::ostringstream os;
  os.precision(17);
  os << "length,count\n";
  const auto& ls = profile.lengths;
  for (std::size_t k = 0; k < ls.size();) {
    std::size_t upto = k;
    while (upto < ls.size() && ls[upto] == ls[k]) ++upto;
    os << ls[k] << ',' << upto << '\n';
    k = upto;
  }
  return os.str();
}

}  // namespace entrograph
