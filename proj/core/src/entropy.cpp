#include "entrograph/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "entrograph/error.hpp"

namespace entrograph {

const char* to_string(RootMethod method) noexcept {
  switch (method) {
    case RootMethod::Newton: return "newton";
    case RootMethod::Bisection: return "bisection";
    case RootMethod::Hybrid: return "hybrid";
  }
  return "unknown";
}

std::size_t CountProfile::count_below(double r) const {
  return static_cast<std::size_t>(std::lower_bound(lengths.begin(), lengths.end(), r) -
                                  lengths.begin());
}

const char* to_string(CountKind kind) noexcept {
  switch (kind) {
    case CountKind::PathsXY: return "paths-xy";
    case CountKind::PathsFromX: return "paths-from-x";
    case CountKind::CyclesAtV: return "cycles-at-v";
    case CountKind::PrimitiveCyclesAtV: return "primitive-cycles-at-v";
  }
  return "unknown";
}

namespace {

struct Probe {
  double rho = 0.0;
  double dlog = 0.0;  // d/dt log rho, NaN when not requested
};

class RhoEvaluator {
 public:
  RhoEvaluator(const TransferPattern& pattern, const SpectralOptions& base)
      : pattern_(pattern), options_(base) {}

  Probe operator()(double t, bool derivative) const {
    SpectralOptions so = options_;
    so.want_left = derivative;
    const Eigen::MatrixXd m = pattern_.at(t);
    const PerronData pd = spectral_radius(m, so);
    Probe p;
    p.rho = pd.rho;
    p.dlog = std::numeric_limits<double>::quiet_NaN();
    if (derivative && pd.rho > 0.0) {
      const Eigen::MatrixXd dm = pattern_.derivative_at(t);
      const double num = pd.left.dot(dm * pd.right);
      const double den = pd.left.dot(pd.right);
      if (den > 0.0) p.dlog = num / den / pd.rho;
    }
    return p;
  }

 private:
  const TransferPattern& pattern_;
  SpectralOptions options_;
};

SpectralOptions inner_spectral(const EntropyOptions& opt) {
  SpectralOptions so = opt.spectral;
  so.tol = std::max(std::min(so.tol, opt.tol / 100.0), 1e-13);
  return so;
}

}  // namespace

RootResult unit_radius_root(const TransferPattern& pattern, double t_lo, double t_hi,
                            const EntropyOptions& opt) {
  const RhoEvaluator rho_at(pattern, inner_spectral(opt));
  const bool use_newton = opt.method != RootMethod::Bisection;
  const double eps = std::numeric_limits<double>::epsilon();

  double lo = t_lo;
  double hi = t_hi;
  double t = use_newton ? hi : 0.5 * (lo + hi);
  int newton_steps = 0;
  int bisect_steps = 0;
  RootResult out;
  bool done = false;
  Probe p;

  for (int iter = 1; iter <= opt.max_iter; ++iter) {
    p = rho_at(t, use_newton);
    out.iterations = iter;
    if (p.rho > 1.0) {
      lo = std::max(lo, t);
    } else {
      hi = std::min(hi, t);
    }
    const double residual = std::abs(p.rho - 1.0);
    double next = 0.5 * (lo + hi);
    double newton_step = std::numeric_limits<double>::infinity();
    bool newton_ok = false;
    if (use_newton && std::isfinite(p.dlog) && p.dlog < 0.0 && p.rho > 0.0) {
      const double candidate = t - std::log(p.rho) / p.dlog;
      newton_step = std::abs(candidate - t);
      if (candidate >= lo && candidate <= hi) {
        next = candidate;
        newton_ok = true;
      }
    }

    const bool width_small = hi - lo <= std::max(opt.tol, 4.0 * eps * hi);
    if (residual <= opt.tol && (use_newton ? newton_step <= opt.tol : width_small)) {
      done = true;
      break;
    }
    if (hi - lo <= 4.0 * eps * std::max(hi, 1.0)) {
      // Bracket exhausted in floating point; accept if the residual is within
      // what rounding allows, otherwise fall through to the failure below.
      done = residual <= std::max(opt.tol, 1e3 * eps);
      break;
    }
    (newton_ok ? newton_steps : bisect_steps)++;
    t = next;
  }
  if (!done) {
    std::ostringstream os;
    os.precision(17);
    os << "entropy root finding did not converge in " << opt.max_iter
       << " iterations (bracket [" << lo << ", " << hi << "], rho " << p.rho << ")";
    throw Error(ErrorCode::NonConvergence, os.str());
  }

  out.t = t;
  out.rho = p.rho;
  out.residual = std::abs(p.rho - 1.0);
  out.method = bisect_steps == 0 ? RootMethod::Newton
               : newton_steps == 0 ? RootMethod::Bisection
                                   : RootMethod::Hybrid;
  if (!use_newton) out.method = RootMethod::Bisection;

  // Certify a bracket of width about tol around the reported root.
  out.t_lo = lo;
  out.t_hi = hi;
  double delta = std::max(0.5 * opt.tol, 4.0 * eps * t);
  for (int k = 0; k < 12; ++k, delta *= 4.0) {
    const double a = std::max(t - delta, t_lo);
    const double b = std::min(t + delta, t_hi);
    const bool a_ok = a == t_lo || rho_at(a, false).rho >= 1.0;
    const bool b_ok = b == t_hi || rho_at(b, false).rho <= 1.0;
    if (a_ok && b_ok) {
      out.t_lo = std::max(a, std::min(lo, t));
      out.t_hi = std::min(b, std::max(hi, t));
      break;
    }
  }
  return out;
}

double trivial_upper_bound(const MetricGraph& graph) {
  std::size_t max_degree = 0;
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    max_degree = std::max(max_degree, graph.degree(v));
  }
  if (max_degree < 3 || graph.dart_count() == 0) return 0.0;
  return std::log(static_cast<double>(max_degree - 1)) / graph.min_length();
}

RootResult hyperbolic_entropy(const MetricGraph& reduced, const EntropyOptions& opt,
                              double t_floor) {
  const TransferPattern pattern = transfer_pattern(reduced, WalkMode::NonBacktracking);
  const RhoEvaluator rho_at(pattern, inner_spectral(opt));

  double lo = std::max(t_floor, 0.0);
  double hi = trivial_upper_bound(reduced);
  if (!(hi > 0.0)) {
    throw Error(ErrorCode::Precondition, "graph is not hyperbolic (maximum degree below 3)");
  }
  hi = std::max(hi, lo);
  for (int k = 0; rho_at(hi, false).rho > 1.0; ++k) {
    if (k == 60) throw Error(ErrorCode::NonConvergence, "could not bracket the entropy");
    hi = 2.0 * hi + 1e-3;
  }
  if (lo > 0.0 && rho_at(lo, false).rho < 1.0) {
    // The warm start overshot; fall back to the unconditional lower end.
    hi = std::min(hi, lo);
    lo = 0.0;
  }
  return unit_radius_root(pattern, lo, hi, opt);
}

EntropyResult volume_entropy(const MetricGraph& graph, const EntropyOptions& opt) {
  return volume_entropy(graph, opt, 0.0);
}

EntropyResult volume_entropy(const MetricGraph& graph, const EntropyOptions& opt, double t_floor) {
  require_valid(graph);
  const Reduction red = reduce(graph);
  EntropyResult out;
  bool have = false;
  for (std::size_t c = 0; c < red.components.size(); ++c) {
    const ReducedComponent& rc = red.components[c];
    ComponentEntropy ce{c, rc.kind, 0.0, 0};
    if (rc.kind == ComponentKind::Hyperbolic) {
      const RootResult root = hyperbolic_entropy(rc.graph, opt, t_floor);
      ce.h = root.t;
      ce.iterations = root.iterations;
      out.iterations += root.iterations;
      if (!have || root.t > out.h) {
        have = true;
        out.h = root.t;
        out.residual = root.residual;
        out.t_lo = root.t_lo;
        out.t_hi = root.t_hi;
        out.method = root.method;
      }
    }
    out.per_component.push_back(ce);
  }
  return out;
}

std::vector<std::pair<double, double>> rho_curve(const MetricGraph& graph,
                                                 const std::vector<double>& t_values,
                                                 WalkMode mode) {
  const TransferPattern pattern = transfer_pattern(graph, mode);
  SpectralOptions so;
  so.want_left = false;
  std::vector<std::pair<double, double>> out;
  out.reserve(t_values.size());
  for (double t : t_values) out.emplace_back(t, spectral_radius(pattern.at(t), so).rho);
  return out;
}

CountEstimate entropy_from_counts(const CountProfile& profile, double r1, double r2,
                                  std::size_t grid_points) {
  if (!(r2 > r1) || r2 > profile.horizon || profile.lengths.empty() ||
      r1 < profile.lengths.front()) {
    std::ostringstream os;
    os << "window [" << r1 << ", " << r2 << "] does not fit the profile (horizon "
       << profile.horizon << ")";
    throw Error(ErrorCode::InsufficientData, os.str());
  }
  grid_points = std::max<std::size_t>(grid_points, 2);
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t k = 0; k < grid_points; ++k) {
    const double r = r1 + (r2 - r1) * static_cast<double>(k) / static_cast<double>(grid_points - 1);
    const std::size_t n = profile.count_below(r);
    if (n == 0) continue;
    xs.push_back(r);
    ys.push_back(std::log(static_cast<double>(n)));
  }
  if (xs.size() < 4) {
    throw Error(ErrorCode::InsufficientData, "fewer than 4 usable sample points in the window");
  }
  const double m = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  CountEstimate out;
  out.samples = xs.size();
  out.h = sxx > 0.0 ? sxy / sxx : 0.0;
  // Pointwise estimates are taken relative to the window start, which cancels
  // the constant in N(r) ~ C e^{hr}; only the upper half is used so each one
  // spans at least half the window.
  const double r_anchor = xs.front();
  const double y_anchor = ys.front();
  const double r_mid = 0.5 * (xs.front() + xs.back());
  for (std::size_t k = 1; k < xs.size(); ++k) {
    if (xs[k] < r_mid) continue;
    const double pointwise = (ys[k] - y_anchor) / (xs[k] - r_anchor);
    out.band = std::max(out.band, std::abs(pointwise - out.h));
  }
  return out;
}

}  // namespace entrograph
