#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "entrograph/graph.hpp"
#include "entrograph/profile.hpp"
#include "entrograph/spectral.hpp"

namespace entrograph {

constexpr std::size_t kDefaultCap = 10'000'000;

struct EnumerationSpec {
  CountKind kind = CountKind::PathsFromX;
  WalkMode mode = WalkMode::NonBacktracking;
  VertexId source = 0;
  VertexId target = 0;  ///< PathsXY only
  double horizon = 0.0;
  /// Maximum number of path prefixes the search may visit.
  std::size_t cap = kDefaultCap;
};

/// Exhaustive depth-first enumeration of the walks selected by `spec` with
/// length strictly below the horizon. Every visited prefix counts against the
/// cap; exceeding it throws HorizonError carrying a horizon that provably
/// fits (see safe_horizon). Parallel over the first dart; the result is
/// sorted and independent of scheduling.
CountProfile enumerate(const MetricGraph& graph, const EnumerationSpec& spec);

/// Largest R for which the enumeration selected by `spec` (horizon ignored)
/// is guaranteed to visit at most `spec.cap` prefixes. Uses
/// visits(R) <= e^{tR} F(t) for every t above the growth rate, where F is the
/// generating function of all visited prefixes. +infinity when the walk set is
/// finite and fits.
double safe_horizon(const MetricGraph& graph, const EnumerationSpec& spec);

/// Constant M with N_x(r) <= M e^{hr} for every r >= 0, where N_x counts
/// non-backtracking paths from x. Available when the component of x has
/// minimum degree at least 3 and rho(B(h)) <= 1 holds in floating point (pass
/// a value nudged above a computed entropy); otherwise nullopt.
std::optional<double> path_count_constant(const MetricGraph& graph, VertexId x, double h);

// ---------------------------------------------------------------------------
// Laplace transform identity

struct LaplaceOptions {
  /// Minimum distance of t above the entropy.
  double margin = 0.2;
};

struct LaplaceReport {
  double t = 0.0;
  double h = 0.0;
  double horizon = 0.0;
  /// Resolvent value of the generating function matching the profile kind.
  double f_value = 0.0;
  /// t * integral_0^R N(r) e^{-tr} dr, evaluated exactly.
  double truncated = 0.0;
  /// Rigorous upper bound on t * integral_R^inf N(r) e^{-tr} dr.
  double tail_upper = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool inside = false;
};

/// Checks the resolvent value against the truncated Laplace integral of the
/// enumerated counts plus a tail bracket. Non-backtracking profiles only.
/// Throws Error(MarginTooSmall) when t < h + margin.
LaplaceReport laplace_check(const CountProfile& profile, const MetricGraph& graph, double t,
                            const LaplaceOptions& options = {});

// ---------------------------------------------------------------------------
// Recursions

struct RecursionPoint {
  double r = 0.0;
  long long lhs = 0;
  long long rhs = 0;
  bool ok() const noexcept { return lhs == rhs; }
};

struct RecursionReport {
  /// N_v(r) = k(r) + sum N_v(r - l_i) over backtracking primitive cycles.
  std::vector<RecursionPoint> backtracking;
  /// N_i(r) = sum_j sum_{l^{ij}_m < r} (1 + sum_{k != j} N_k(r - l^{ij}_m)),
  /// summed over i; `nb_mismatches` counts failures of the individual i.
  std::vector<RecursionPoint> non_backtracking;
  std::size_t nb_mismatches = 0;

  bool ok() const noexcept;
};

/// Checks both recursions as integer identities at every radius.
/// Throws HorizonError if the enumerations do not fit `cap`.
RecursionReport verify_recursions(const MetricGraph& graph, VertexId v,
                                  const std::vector<double>& r_grid,
                                  std::size_t cap = kDefaultCap);

/// `count` radii spread over (r_lo, r_hi), each moved to the midpoint of a
/// gap of at least `min_gap` between consecutive distinct cycle lengths at v
/// (both walk modes), so strict-inequality counts are free of rounding ties.
std::vector<double> recursion_grid(const MetricGraph& graph, VertexId v, double r_lo, double r_hi,
                                   std::size_t count, std::size_t cap = kDefaultCap,
                                   double min_gap = 1e-7);

// ---------------------------------------------------------------------------
// Growth bounds

struct BoundViolation {
  double r = 0.0;
  double count = 0.0;
  double bound = 0.0;
};

struct BoundsReport {
  double h = 0.0;
  std::size_t n = 0;
  Eigen::MatrixXd a;  ///< A(h), a_ij = sum_{k != j} g_ik(h)
  double rho_a = 0.0;
  Eigen::VectorXd w;  ///< Perron vector of A(h), unit sum
  double m_formula = 0.0;
  /// inf of N_v(r) e^{-hr} over enumerated r above the shortest cycle.
  double m_empirical = 0.0;
  double horizon = 0.0;
  std::size_t events = 0;
  std::vector<BoundViolation> violations;

  bool ok(double rho_tol = 1e-8) const noexcept {
    return violations.empty() && std::abs(rho_a - 1.0) <= rho_tol;
  }
};

/// Two-sided growth of non-backtracking cycles at v on a reduced connected
/// hyperbolic graph, with M = (n-1)/(n-2) * sum(w) / min(w).
BoundsReport growth_bounds(const MetricGraph& graph, VertexId v, double r_max,
                           std::size_t cap = kDefaultCap);

struct BacktrackingEntropy {
  double transfer_root = 0.0;  ///< root of rho(B_bt(t)) = 1
  double series_root = 0.0;    ///< root of g(t) = 1
  int iterations = 0;
};

/// Growth rate of backtracking cycles at v by the two routes.
BacktrackingEntropy backtracking_entropy(const MetricGraph& graph, VertexId v,
                                         double tol = 1e-10);

struct BacktrackingBounds {
  double h = 0.0;
  double l1 = 0.0;
  double m_formula = 0.0;  ///< max{2, 3 e^{-h l1}}
  double horizon = 0.0;
  std::size_t events = 0;
  std::vector<BoundViolation> violations;  ///< of N_v(r) <= M e^{hr} - 1
  bool ok() const noexcept { return violations.empty(); }
};

BacktrackingBounds backtracking_bounds(const MetricGraph& graph, VertexId v, double r_max,
                                       std::size_t cap = kDefaultCap);

/// "length,count" CSV with one row per distinct length and the number of
/// recorded lengths up to and including it.
std::string profile_csv(const CountProfile& profile);

}  // namespace entrograph
