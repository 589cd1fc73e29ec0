#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "entrograph/graph.hpp"

namespace entrograph {

enum class WalkMode { NonBacktracking, Backtracking };

const char* to_string(WalkMode mode) noexcept;

/// Dart-indexed transition structure, independent of t. Entry (d, d') of the
/// matrix at t is exp(-t * length[d']) for every listed transition d -> d'.
struct TransferPattern {
  std::size_t size = 0;
  std::vector<std::pair<DartId, DartId>> transitions;
  std::vector<double> length;

  Eigen::MatrixXd at(double t) const;
  /// Entrywise derivative in t of at(t).
  Eigen::MatrixXd derivative_at(double t) const;
  /// Successor lists in CSR form (successors of d are succ[offset[d]..offset[d+1])).
  void successors(std::vector<std::size_t>& offset, std::vector<DartId>& succ) const;
};

TransferPattern transfer_pattern(const MetricGraph& graph, WalkMode mode);

struct TransferMatrix {
  Eigen::MatrixXd matrix;
  double t = 0.0;
  WalkMode mode = WalkMode::NonBacktracking;
};

TransferMatrix build_transfer(const MetricGraph& graph, double t,
                              WalkMode mode = WalkMode::NonBacktracking);

struct SpectralOptions {
  /// Relative gap between the Collatz-Wielandt bounds at which iteration stops.
  double tol = 1e-12;
  int max_iter = 10000;
  bool want_left = true;
};

struct PerronData {
  double rho = 0.0;
  /// Rigorous enclosure of rho for the maximizing component.
  double lower = 0.0;
  double upper = 0.0;
  /// Perron vectors of the maximizing strongly connected block, zero
  /// elsewhere. They satisfy the eigen equation on that block's rows
  /// (columns for `left`), not necessarily on the whole matrix.
  Eigen::VectorXd right;
  Eigen::VectorXd left;
  bool converged = false;
  int iterations = 0;
};

/// Spectral radius of a nonnegative square matrix, computed per strongly
/// connected component of its support. Throws Error(NonConvergence).
PerronData spectral_radius(const Eigen::MatrixXd& matrix, const SpectralOptions& options = {});

/// Strongly connected components of the support digraph (i -> j iff m(i,j) > 0),
/// in reverse topological order.
std::vector<std::vector<std::size_t>> strongly_connected(const Eigen::MatrixXd& matrix);

struct ResolventOptions {
  /// Required distance of rho below 1.
  double margin = 1e-9;
  SpectralOptions spectral{};
};

/// LU factorization of (I - M) for a matrix with rho(M) < 1 - margin. The
/// constructor throws Error(DivergentSeries) otherwise.
class Resolvent {
 public:
  Resolvent(const Eigen::MatrixXd& matrix, const ResolventOptions& options = {});
  /// Skips the spectral check; the caller vouches for rho.
  Resolvent(const Eigen::MatrixXd& matrix, double known_rho, const ResolventOptions& options = {});

  double rho() const noexcept { return rho_; }
  /// Solves (I - M) u = rhs with iterative refinement.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  Eigen::MatrixXd solve_many(const Eigen::MatrixXd& rhs) const;

 private:
  void factor(const ResolventOptions& options);

  Eigen::MatrixXd system_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double rho_ = 0.0;
};

/// One-shot convenience over Resolvent.
Eigen::VectorXd solve_resolvent(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& rhs,
                                const ResolventOptions& options = {});

}  // namespace entrograph
