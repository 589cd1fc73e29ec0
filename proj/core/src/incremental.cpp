#include "entrograph/incremental.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "entrograph/entropy.hpp"
#include "entrograph/error.hpp"

namespace entrograph {

const char* to_string(VertexVariant variant) noexcept {
  switch (variant) {
    case VertexVariant::PaperF: return "paper-f";
    case VertexVariant::TransferDA: return "transfer-da";
  }
  return "unknown";
}

const char* to_string(ConstantMethod method) noexcept {
  switch (method) {
    case ConstantMethod::Resolvent: return "resolvent";
    case ConstantMethod::Counting: return "counting";
  }
  return "unknown";
}

namespace {

double component_entropy(const MetricGraph& component) {
  return volume_entropy(component).h;
}

double rho_of(const Eigen::MatrixXd& m) {
  SpectralOptions so;
  so.want_left = false;
  so.tol = 1e-14;
  return spectral_radius(m, so).rho;
}

struct Root {
  double t = 0.0;
  double value = 0.0;
  int iterations = 0;
};

/// Root of an increasing function on (lo, hi]; nullopt when fn(lo) >= 0.
/// `fn` returns nullopt where the underlying series diverge, which only
/// happens below the root. Illinois false position, with a bisection step
/// whenever the bracket fails to halve over three steps.
std::optional<Root> increasing_root(const std::function<std::optional<double>(double)>& fn,
                                    double lo, double hi, double tol, int max_iter) {
  std::optional<double> f_lo = fn(lo);
  if (f_lo && *f_lo >= 0.0) return std::nullopt;
  std::optional<double> f_hi = fn(hi);
  for (int k = 0; !f_hi || *f_hi <= 0.0; ++k) {
    if (f_hi && *f_hi == 0.0) return Root{hi, 0.0, 0};
    if (k == 60) throw Error(ErrorCode::NonConvergence, "could not bracket the root");
    lo = hi;
    f_lo = f_hi;
    hi = 2.0 * hi + 1e-3;
    f_hi = fn(hi);
  }

  double a = lo, b = hi;
  double fa = f_lo.value_or(-std::numeric_limits<double>::infinity());
  double fb = *f_hi;
  int side = 0;
  double width = b - a;
  Root out;
  for (int iter = 1; iter <= max_iter; ++iter) {
    out.iterations = iter;
    double t = 0.5 * (a + b);
    const bool halved = b - a <= 0.5 * width;
    if (std::isfinite(fa) && (iter % 3 != 0 || halved)) {
      const double cand = b - fb * (b - a) / (fb - fa);
      if (cand > a && cand < b) t = cand;
    }
    if (iter % 3 == 0) width = b - a;
    const std::optional<double> ft = fn(t);
    if (ft && *ft == 0.0) return Root{t, 0.0, iter};
    if (!ft || *ft < 0.0) {
      a = t;
      fa = ft.value_or(-std::numeric_limits<double>::infinity());
      if (side == -1 && std::isfinite(fb)) fb *= 0.5;
      side = -1;
    } else {
      b = t;
      fb = *ft;
      if (side == 1 && std::isfinite(fa)) fa *= 0.5;
      side = 1;
    }
    if (b - a <= tol || b - a <= 4.0 * std::numeric_limits<double>::epsilon() * b) break;
  }
  if (b - a > std::max(tol, 4.0 * std::numeric_limits<double>::epsilon() * b)) {
    throw Error(ErrorCode::NonConvergence, "incremental root did not converge");
  }
  // Report the end with the smaller residual; both lie within tol of the root.
  const std::optional<double> va = fn(a);
  const std::optional<double> vb = fn(b);
  if (va && std::abs(*va) < std::abs(*vb)) {
    out.t = a;
    out.value = *va;
  } else {
    out.t = b;
    out.value = *vb;
  }
  return out;
}

void check_vertex(const MetricGraph& graph, VertexId v) {
  if (v >= graph.vertex_count()) {
    throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(v) + " out of range");
  }
}

double graph_entropy_with(const MetricGraph& graph, double component_h,
                          const IncrementalOptions& options) {
  if (!options.whole_graph) return component_h;
  return std::max(component_h, volume_entropy(graph).h);
}

void no_root(const char* what) {
  throw Error(ErrorCode::NonConvergence, std::string(what) + " has no root above the base entropy");
}

struct Located {
  Subgraph sub;
  std::vector<VertexId> local;  // attachment vertices inside sub
  std::vector<double> length;
};

Located locate_attachments(const MetricGraph& graph, std::span<const Attachment> attachments) {
  if (attachments.empty()) throw Error(ErrorCode::EmptyAttachments, "no attachments given");
  for (const Attachment& a : attachments) {
    check_vertex(graph, a.vertex);
    if (!(a.length > 0.0) || !std::isfinite(a.length)) {
      throw Error(ErrorCode::NonPositiveLength, "attachment length must be positive and finite");
    }
  }
  Located out;
  out.sub = component_containing(graph, attachments.front().vertex);
  for (const Attachment& a : attachments) {
    if (!std::binary_search(out.sub.to_parent.begin(), out.sub.to_parent.end(), a.vertex)) {
      throw Error(ErrorCode::DisconnectedPair, "attachment vertices lie in different components");
    }
    out.local.push_back(local_vertex(out.sub, a.vertex));
    out.length.push_back(a.length);
  }
  return out;
}

std::optional<VertexMatrices> matrices_on(const Located& loc, double t,
                                          const GenFunOptions& options) {
  const PathSeries series(loc.sub.graph, t, options);
  if (!series.convergent()) return std::nullopt;
  const auto n = static_cast<Eigen::Index>(loc.local.size());
  VertexMatrices m;
  m.M = series.f_matrix(loc.local, loc.local);
  m.F = Eigen::MatrixXd::Zero(n, n);
  m.L = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = std::exp(-(loc.length[i] + loc.length[j]) * t);
      const bool bigon = i != j && loc.local[i] == loc.local[j];
      d(i, j) = w * (m.M(i, j) + (bigon ? 1.0 : 0.0));
      if (i != j) {
        m.L(i, j) = w;
        m.F(i, j) = w * m.M(i, j);
      }
    }
  }
  const Eigen::MatrixXd a = Eigen::MatrixXd::Ones(n, n) - Eigen::MatrixXd::Identity(n, n);
  m.DA = d * a;
  return m;
}

double pole_constant(const std::function<std::optional<double>(double)>& f, double h, int ladder) {
  // c(t) = f(t) (t - h) / t, extrapolated linearly in (t - h) with ratio 2.
  auto c_at = [&](double t) {
    const auto v = f(t);
    if (!v) throw Error(ErrorCode::DivergentSeries, "series diverges on the constant ladder");
    return *v * (t - h) / t;
  };
  const double t_coarse = h * (1.0 + 0.1 * std::ldexp(1.0, -(ladder - 1)));
  const double t_fine = h * (1.0 + 0.1 * std::ldexp(1.0, -ladder));
  return 2.0 * c_at(t_fine) - c_at(t_coarse);
}

}  // namespace

// ---------------------------------------------------------------------------

EdgeAdditionResult entropy_after_edge(const MetricGraph& graph, VertexId x, VertexId y, double l0,
                                      const IncrementalOptions& options) {
  require_valid(graph);
  check_vertex(graph, x);
  check_vertex(graph, y);
  if (x == y) throw Error(ErrorCode::Precondition, "the new edge must join two distinct vertices");
  if (!(l0 > 0.0) || !std::isfinite(l0)) {
    throw Error(ErrorCode::NonPositiveLength, "edge length must be positive and finite");
  }
  if (graph.adjacent(x, y)) {
    throw Error(ErrorCode::AdjacentVertices,
                "vertices " + graph.name(x) + " and " + graph.name(y) + " are adjacent");
  }
  const Subgraph comp = component_containing(graph, x);
  if (!std::binary_search(comp.to_parent.begin(), comp.to_parent.end(), y)) {
    throw Error(ErrorCode::DisconnectedPair,
                "vertices " + graph.name(x) + " and " + graph.name(y) + " are in different components");
  }
  const MetricGraph& c = comp.graph;
  const VertexId xl = local_vertex(comp, x);
  const VertexId yl = local_vertex(comp, y);

  EdgeAdditionResult out;
  out.l0 = l0;
  out.h_base = options.floor ? *options.floor : component_entropy(c);
  const long betti = static_cast<long>(c.edge_count()) - static_cast<long>(c.vertex_count()) + 1;
  if (betti == 0) {
    // The new edge closes the only cycle: entropy stays 0.
    out.h_prime = out.h_base;
    out.at_floor = options.floor.has_value();
    out.h_graph = graph_entropy_with(graph, 0.0, options);
    return out;
  }

  const VertexId ends[2] = {xl, yl};
  auto psi = [&](double t) -> std::optional<double> {
    const PathSeries series(c, t, options.genfun);
    if (!series.convergent()) return std::nullopt;
    const Eigen::MatrixXd f = series.f_matrix(ends, ends);
    const double s = std::sqrt(f(0, 0) * f(1, 1)) + f(0, 1);
    if (!(s > 0.0)) return std::numeric_limits<double>::infinity();
    return l0 * t - std::log(s);
  };
  const MetricGraph edited = add_edge(c, xl, yl, l0);
  const double hi = std::max(trivial_upper_bound(edited), out.h_base) * 1.01 + 1e-6;
  const auto root = increasing_root(psi, out.h_base, hi, options.tol, options.max_iter);
  if (!root) {
    if (!options.floor) no_root("the edge equation");
    out.h_prime = out.h_base;
    out.at_floor = true;
    out.iterations = 1;
  } else {
    out.h_prime = root->t;
    out.residual = std::abs(root->value);
    out.iterations = root->iterations;
  }
  out.h_graph = graph_entropy_with(graph, out.h_prime, options);
  return out;
}

std::optional<VertexMatrices> vertex_matrices(const MetricGraph& graph,
                                              std::span<const Attachment> attachments, double t,
                                              const GenFunOptions& options) {
  return matrices_on(locate_attachments(graph, attachments), t, options);
}

VertexAdditionResult entropy_after_vertex(const MetricGraph& graph,
                                          std::span<const Attachment> attachments,
                                          VertexVariant variant,
                                          const IncrementalOptions& options) {
  require_valid(graph);
  const Located loc = locate_attachments(graph, attachments);
  if (attachments.size() < 3) {
    throw Error(ErrorCode::TooFewAttachments,
                "need at least 3 attachments, got " + std::to_string(attachments.size()));
  }
  VertexAdditionResult out;
  out.variant = variant;
  out.h_base = options.floor ? *options.floor : component_entropy(loc.sub.graph);

  auto pick = [&](const VertexMatrices& m) -> const Eigen::MatrixXd& {
    return variant == VertexVariant::PaperF ? m.F : m.DA;
  };
  auto minus_log_rho = [&](double t) -> std::optional<double> {
    const auto m = matrices_on(loc, t, options.genfun);
    if (!m) return std::nullopt;
    const double r = rho_of(pick(*m));
    if (!(r > 0.0)) return std::numeric_limits<double>::infinity();
    return -std::log(r);
  };

  std::vector<Attachment> local_att;
  for (std::size_t i = 0; i < loc.local.size(); ++i) local_att.push_back({loc.local[i], loc.length[i]});
  const MetricGraph edited = add_vertex(loc.sub.graph, local_att);
  const double hi = std::max(trivial_upper_bound(edited), out.h_base) * 1.01 + 1e-6;
  const auto root = increasing_root(minus_log_rho, out.h_base, hi, options.tol, options.max_iter);
  if (!root) {
    if (!options.floor) no_root(to_string(variant));
    out.h_prime = out.h_base;
    out.at_floor = true;
    out.iterations = 1;
    out.h_graph = out.h_prime;
    return out;
  }
  out.h_prime = root->t;
  out.iterations = root->iterations;

  const auto m = matrices_on(loc, out.h_prime, options.genfun);
  if (m) {
    out.F_spectral_residual = std::abs(rho_of(pick(*m)) - 1.0);
    out.L_norm = rho_of(m->L);
    out.M_norm = rho_of(m->M);
  }
  out.h_graph = graph_entropy_with(graph, out.h_prime, options);
  return out;
}

Eqn6Report check_eqn6(const MetricGraph& graph, std::span<const Attachment> attachments, double t,
                      const GenFunOptions& options) {
  const auto m = vertex_matrices(graph, attachments, t, options);
  if (!m) {
    std::ostringstream os;
    os << "generating functions diverge at t = " << t;
    throw Error(ErrorCode::DivergentSeries, os.str());
  }
  Eqn6Report r;
  r.t = t;
  r.rho_F = rho_of(m->F);
  r.rho_L = rho_of(m->L);
  r.rho_M = rho_of(m->M);
  r.product = r.rho_L * r.rho_M;
  r.discrepancy = std::abs(r.rho_F - r.product);
  r.ratio = r.product > 0.0 ? r.rho_F / r.product : std::numeric_limits<double>::quiet_NaN();
  return r;
}

// ---------------------------------------------------------------------------

double relative_gap(double a, double b) noexcept {
  const double s = std::max(std::abs(a), std::abs(b));
  return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

ConstantEstimate estimate_constant_C(const MetricGraph& graph, VertexId x, VertexId y,
                                     ConstantMethod method, const ConstantOptions& options) {
  require_valid(graph);
  check_vertex(graph, x);
  check_vertex(graph, y);
  ConstantEstimate out;
  out.method = method;
  const Subgraph comp = component_containing(graph, x);
  if (!std::binary_search(comp.to_parent.begin(), comp.to_parent.end(), y)) {
    out.disconnected = true;
    return out;
  }
  const MetricGraph& c = comp.graph;
  const EntropyResult er = volume_entropy(c);
  if (er.per_component.empty() || er.per_component.front().kind != ComponentKind::Hyperbolic) {
    throw Error(ErrorCode::Precondition, "constant estimation needs a hyperbolic component");
  }
  out.h = er.h;
  const VertexId xl = local_vertex(comp, x);
  const VertexId yl = local_vertex(comp, y);
  const VertexId ends[2] = {xl, yl};

  if (method == ConstantMethod::Resolvent) {
    Eigen::Matrix2d k = Eigen::Matrix2d::Zero();
    for (int a = 0; a < 2; ++a) {
      for (int b = a; b < 2; ++b) {
        auto f = [&](double t) -> std::optional<double> {
          const PathSeries s(c, t, options.genfun);
          if (!s.convergent()) return std::nullopt;
          return s.f(ends[a], ends[b]);
        };
        k(a, b) = pole_constant(f, out.h, options.ladder);
      }
    }
    out.C_xx = k(0, 0);
    out.C_xy = k(0, 1);
    out.C_yy = k(1, 1);
  } else {
    EnumerationSpec spec;
    spec.kind = CountKind::PathsXY;
    spec.mode = WalkMode::NonBacktracking;
    spec.cap = options.cap;
    double horizon = options.horizon;
    if (!(horizon > 0.0)) {
      spec.source = xl;
      spec.target = xl;
      horizon = safe_horizon(c, spec);
      spec.source = yl;
      horizon = std::min(horizon, safe_horizon(c, spec));
    }
    out.horizon = horizon;
    auto tail_mean = [&](VertexId s, VertexId t) {
      spec.source = s;
      spec.target = t;
      spec.horizon = horizon;
      const CountProfile p = enumerate(c, spec);
      constexpr int kSamples = 256;
      double sum = 0.0;
      for (int k = 0; k < kSamples; ++k) {
        const double r = horizon * (0.5 + 0.5 * k / static_cast<double>(kSamples - 1));
        sum += static_cast<double>(p.count_below(r)) * std::exp(-out.h * r);
      }
      return sum / kSamples;
    };
    out.C_xx = tail_mean(xl, xl);
    out.C_yy = tail_mean(yl, yl);
    out.C_xy = tail_mean(xl, yl);
  }
  out.C = (std::sqrt(out.C_xx * out.C_yy) + out.C_xy) * out.h;
  return out;
}

ConstantCrossCheck cross_check_constant(const MetricGraph& graph, VertexId x, VertexId y,
                                        const ConstantOptions& options) {
  ConstantCrossCheck out;
  out.resolvent = estimate_constant_C(graph, x, y, ConstantMethod::Resolvent, options);
  out.counting = estimate_constant_C(graph, x, y, ConstantMethod::Counting, options);
  out.gap = relative_gap(out.resolvent.C, out.counting.C);
  out.disagree = out.gap > kConstantWarnRatio;
  if (out.disagree) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "resolvent C = %.6g and counting C = %.6g differ by %.1f%% (lengths may be "
                  "commensurable, or the counting horizon too short)",
                  out.resolvent.C, out.counting.C, 100.0 * out.gap);
    out.warning = buf;
  }
  return out;
}

double predict_edge_asymptotic(double h, double C, double l) { return h + C * std::exp(-h * l); }

AsymptoticFit edge_asymptotic_sweep(const MetricGraph& graph, VertexId x, VertexId y,
                                    std::vector<double> lengths, double C,
                                    const IncrementalOptions& options) {
  std::sort(lengths.begin(), lengths.end());
  AsymptoticFit fit;
  fit.C = C;
  for (double l : lengths) {
    const EdgeAdditionResult r = entropy_after_edge(graph, x, y, l, options);
    fit.h = r.h_base;
    AsymptoticSample s;
    s.l = l;
    s.h_prime = r.h_prime;
    s.observed = r.h_prime - r.h_base;
    s.predicted = C * std::exp(-r.h_base * l);
    s.scaled = s.observed * std::exp(r.h_base * l);
    fit.samples.push_back(s);
  }
  if (fit.samples.size() >= 2 && fit.h > 0.0) {
    const AsymptoticSample& a = fit.samples[fit.samples.size() - 2];
    const AsymptoticSample& b = fit.samples.back();
    const double ea = std::abs(a.observed - a.predicted);
    const double eb = std::abs(b.observed - b.predicted);
    if (ea > 0.0 && eb > 0.0 && b.l > a.l) {
      const double rate = -std::log(eb / ea) / (fit.h * (b.l - a.l));
      fit.gamma = std::clamp(rate - 1.0, 0.0, 1.0);
    }
  }
  return fit;
}

VertexAsymptotic predict_vertex_asymptotic(const MetricGraph& graph,
                                           std::span<const Attachment> attachments,
                                           const ConstantOptions& options) {
  require_valid(graph);
  const Located loc = locate_attachments(graph, attachments);
  if (attachments.size() < 3) {
    throw Error(ErrorCode::TooFewAttachments,
                "need at least 3 attachments, got " + std::to_string(attachments.size()));
  }
  VertexAsymptotic out;
  const EntropyResult er = volume_entropy(loc.sub.graph);
  if (er.per_component.empty() || er.per_component.front().kind != ComponentKind::Hyperbolic) {
    throw Error(ErrorCode::Precondition, "vertex asymptotics need a hyperbolic component");
  }
  const double h = er.h;
  out.h = h;
  const auto n = static_cast<Eigen::Index>(loc.local.size());

  // Entrywise Richardson on the whole matrix M(t) (t - h) / t.
  auto scaled_m = [&](double t) {
    const PathSeries s(loc.sub.graph, t, options.genfun);
    if (!s.convergent()) throw Error(ErrorCode::DivergentSeries, "series diverges on the ladder");
    return Eigen::MatrixXd(s.f_matrix(loc.local, loc.local) * ((t - h) / t));
  };
  const double t_coarse = h * (1.0 + 0.1 * std::ldexp(1.0, -(options.ladder - 1)));
  const double t_fine = h * (1.0 + 0.1 * std::ldexp(1.0, -options.ladder));
  out.K = 2.0 * scaled_m(t_fine) - scaled_m(t_coarse);

  Eigen::MatrixXd lam = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    lam(i, i) = std::exp(-loc.length[i] * h);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) l(i, j) = std::exp(-(loc.length[i] + loc.length[j]) * h);
    }
  }
  const Eigen::MatrixXd a = Eigen::MatrixXd::Ones(n, n) - Eigen::MatrixXd::Identity(n, n);
  out.L_norm = rho_of(l);
  const double lead = rho_of(lam * out.K.cwiseMax(0.0) * lam * a);
  out.C = out.L_norm > 0.0 ? h * lead / out.L_norm : 0.0;
  out.predicted = h + out.C * out.L_norm;
  return out;
}

}  // namespace entrograph
