#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "entrograph/graph.hpp"
#include "entrograph/spectral.hpp"

namespace entrograph {

enum class GenFunKind { PathXY, PathFromX, PrimitiveIJ };
enum class GenFunStatus { Converged, Divergent, Disconnected };

const char* to_string(GenFunStatus status) noexcept;

struct GenFunValue {
  double value = 0.0;
  double t = 0.0;
  GenFunKind kind = GenFunKind::PathXY;
  VertexId x = 0;
  VertexId y = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  GenFunStatus status = GenFunStatus::Converged;

  /// Disconnected pairs converge trivially to 0.
  bool finite() const noexcept { return status != GenFunStatus::Divergent; }
  /// Throws Error(DivergentSeries) when the series diverges.
  double require() const;
};

struct GenFunOptions {
  /// The resolvent is used only when rho(B(t)) < 1 - margin.
  double margin = 1e-9;
  SpectralOptions spectral{};
};

/// Path generating functions of one graph at one t, sharing a single LU
/// factorization of I - B(t). Sums run over nonempty non-backtracking paths.
class PathSeries {
 public:
  PathSeries(const MetricGraph& graph, double t, const GenFunOptions& options = {});

  bool convergent() const noexcept { return resolvent_.has_value() || empty_; }
  double t() const noexcept { return t_; }
  double rho() const noexcept { return rho_; }

  /// f_xy(t). Throws Error(DivergentSeries) when not convergent.
  double f(VertexId x, VertexId y) const;
  /// f_x(t) = sum over y of f_xy(t).
  double f_from(VertexId x) const;
  /// Matrix of f_{xs[a] ys[b]}(t) from one multi-rhs solve.
  Eigen::MatrixXd f_matrix(std::span<const VertexId> xs, std::span<const VertexId> ys) const;

 private:
  Eigen::VectorXd start_weights(VertexId x) const;
  void require_convergent() const;

  MetricGraph graph_;
  double t_;
  double rho_ = 0.0;
  bool empty_ = false;
  std::optional<Resolvent> resolvent_;
};

/// f_xy(t) on the component containing x. Different components yield value 0
/// with status Disconnected.
GenFunValue f_path(const MetricGraph& graph, VertexId x, VertexId y, double t,
                   const GenFunOptions& options = {});

/// f_x(t) on the component containing x.
GenFunValue f_from(const MetricGraph& graph, VertexId x, double t,
                   const GenFunOptions& options = {});

/// g_ij(t): primitive cycles at v leaving along e_i = out_darts(v)[i] and
/// returning along the reverse of e_j, never visiting v in between.
/// Throws Error(InvalidDartIndex).
GenFunValue g_primitive(const MetricGraph& graph, VertexId v, std::size_t i, std::size_t j,
                        double t, const GenFunOptions& options = {});

/// All g_ij(t) at v at once; nullopt when the series diverge.
std::optional<Eigen::MatrixXd> primitive_matrix(const MetricGraph& graph, VertexId v, double t,
                                                const GenFunOptions& options = {});

/// Sum of e^{-l(c) t} over primitive cycles at v in the given walk mode,
/// computed by a resolvent on the walk that stops on reaching v. This route
/// does not go through G minus v. Divergent status when the series diverges.
GenFunValue first_return_series(const MetricGraph& graph, VertexId v, double t, WalkMode mode,
                                const GenFunOptions& options = {});

/// |f_xy(t) - f_yx(t)|. Throws Error(DivergentSeries).
double check_symmetry(const MetricGraph& graph, VertexId x, VertexId y, double t,
                      const GenFunOptions& options = {});

}  // namespace entrograph
