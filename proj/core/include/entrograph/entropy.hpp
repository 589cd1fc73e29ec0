#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "entrograph/graph.hpp"
#include "entrograph/profile.hpp"
#include "entrograph/spectral.hpp"

namespace entrograph {

enum class RootMethod { Newton, Bisection, Hybrid };

const char* to_string(RootMethod method) noexcept;

struct EntropyOptions {
  /// Target for |rho(B(h)) - 1| and for the width of the final bracket.
  double tol = 1e-10;
  int max_iter = 200;
  /// Newton and Hybrid both take Newton steps guarded by bisection;
  /// Bisection never uses derivatives.
  RootMethod method = RootMethod::Hybrid;
  SpectralOptions spectral{};
};

/// Root of rho(B(t)) = 1 for one transfer pattern.
struct RootResult {
  double t = 0.0;
  double rho = 0.0;
  double residual = 0.0;
  int iterations = 0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  /// Newton if every step was a Newton step, Bisection if none was.
  RootMethod method = RootMethod::Newton;
};

/// Solves rho(pattern.at(t)) = 1 for t in [t_lo, t_hi]. Requires
/// rho(t_lo) >= 1 >= rho(t_hi) (not re-checked if the caller set them from
/// evaluations). Throws Error(NonConvergence).
RootResult unit_radius_root(const TransferPattern& pattern, double t_lo, double t_hi,
                            const EntropyOptions& options = {});

/// Upper bound log(k) / l_min, where k + 1 is the largest degree.
double trivial_upper_bound(const MetricGraph& graph);

/// Entropy of one connected Hyperbolic reduced graph. `t_floor` is any value
/// known not to exceed the entropy (a warm start).
RootResult hyperbolic_entropy(const MetricGraph& reduced, const EntropyOptions& options = {},
                              double t_floor = 0.0);

struct ComponentEntropy {
  std::size_t component = 0;
  ComponentKind kind = ComponentKind::Trivial;
  double h = 0.0;
  int iterations = 0;
};

struct EntropyResult {
  double h = 0.0;
  double residual = 0.0;
  int iterations = 0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  RootMethod method = RootMethod::Newton;
  std::vector<ComponentEntropy> per_component;
};

/// Volume entropy: maximum over connected components, each reduced first.
/// Throws Error(InvalidGraph) for graphs failing validate().
EntropyResult volume_entropy(const MetricGraph& graph, const EntropyOptions& options = {});

/// Same, with every hyperbolic component warm-started at `t_floor`. A floor
/// above a component's entropy is detected and falls back to a full bracket.
EntropyResult volume_entropy(const MetricGraph& graph, const EntropyOptions& options,
                             double t_floor);

/// rho(B(t)) of the unreduced graph at each t.
std::vector<std::pair<double, double>> rho_curve(const MetricGraph& graph,
                                                 const std::vector<double>& t_values,
                                                 WalkMode mode = WalkMode::NonBacktracking);

struct CountEstimate {
  double h = 0.0;
  double band = 0.0;
  std::size_t samples = 0;
};

/// Growth rate of N(r) on [r1, r2] from an enumeration profile: the
/// least-squares slope of log N(r) on an even grid. The band is the largest
/// deviation from that slope of the pointwise rates
/// log(N(r) / N(r_first)) / (r - r_first) over the upper half of the window.
/// Throws Error(InsufficientData).
CountEstimate entropy_from_counts(const CountProfile& profile, double r1, double r2,
                                  std::size_t grid_points = 256);

}  // namespace entrograph
