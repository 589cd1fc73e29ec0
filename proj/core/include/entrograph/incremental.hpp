#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "entrograph/counting.hpp"
#include "entrograph/genfun.hpp"
#include "entrograph/graph.hpp"

namespace entrograph {

struct IncrementalOptions {
  /// Absolute tolerance on the returned root.
  double tol = 1e-12;
  int max_iter = 300;
  GenFunOptions genfun{};
  /// A known lower bound for the new entropy. The base entropy is then not
  /// computed (h_base reports the floor), and a root below the floor is
  /// reported as h_prime = floor with `at_floor` set.
  std::optional<double> floor;
  /// Also solve the whole edited graph for h_graph.
  bool whole_graph = true;
};

// ---------------------------------------------------------------------------
// Adding an edge

struct EdgeAdditionResult {
  /// Entropy of the component of x and y after the edge is attached.
  double h_prime = 0.0;
  /// Entropy of that component before.
  double h_base = 0.0;
  /// Entropy of the whole edited graph (other components may dominate).
  double h_graph = 0.0;
  double l0 = 0.0;
  /// |l0 t - log(f_xy + sqrt(f_xx f_yy))| at t = h_prime, i.e. the relative
  /// residual of e^{l0 t} = sqrt(f_xx f_yy) + f_xy.
  double residual = 0.0;
  int iterations = 0;
  bool at_floor = false;
  std::optional<double> C_estimate;
};

/// Root of e^{l0 t} = sqrt(f_xx(t) f_yy(t)) + f_xy(t) above the base entropy,
/// with the generating functions taken on G. Throws Error(AdjacentVertices),
/// Error(DisconnectedPair), Error(Precondition) for x == y.
EdgeAdditionResult entropy_after_edge(const MetricGraph& graph, VertexId x, VertexId y, double l0,
                                      const IncrementalOptions& options = {});

// ---------------------------------------------------------------------------
// Adding a vertex

enum class VertexVariant {
  /// F_ij = (1 - delta_ij) e^{-l_i t} f_{v_i v_j} e^{-l_j t}.
  PaperF,
  /// D(t) (J - I) with D_ij = e^{-(l_i + l_j) t} (f_{v_i v_j} + [v_i = v_j, i != j]).
  TransferDA,
};

const char* to_string(VertexVariant variant) noexcept;

struct VertexAdditionResult {
  double h_prime = 0.0;
  double h_base = 0.0;
  double h_graph = 0.0;
  VertexVariant variant = VertexVariant::TransferDA;
  /// |rho(variant matrix at h_prime) - 1|
  double F_spectral_residual = 0.0;
  double L_norm = 0.0;
  double M_norm = 0.0;
  int iterations = 0;
  bool at_floor = false;
};

/// Entropy after joining a new vertex to the attachment vertices, from the
/// unit spectral radius condition of the chosen matrix variant.
/// Throws Error(EmptyAttachments), Error(TooFewAttachments) for n < 3,
/// Error(DisconnectedPair) when the attachments span several components and
/// Error(NonConvergence) when the variant has no root above the base entropy.
VertexAdditionResult entropy_after_vertex(const MetricGraph& graph,
                                          std::span<const Attachment> attachments,
                                          VertexVariant variant = VertexVariant::TransferDA,
                                          const IncrementalOptions& options = {});

/// The n x n matrices of the vertex-addition step at t.
struct VertexMatrices {
  Eigen::MatrixXd F;   ///< PaperF variant
  Eigen::MatrixXd DA;  ///< TransferDA variant
  Eigen::MatrixXd L;   ///< (1 - delta_ij) e^{-(l_i + l_j) t}
  Eigen::MatrixXd M;   ///< f_{v_i v_j}(t)
};

/// nullopt when the series diverge at t.
std::optional<VertexMatrices> vertex_matrices(const MetricGraph& graph,
                                              std::span<const Attachment> attachments, double t,
                                              const GenFunOptions& options = {});

struct Eqn6Report {
  double t = 0.0;
  double rho_F = 0.0;
  double rho_L = 0.0;
  double rho_M = 0.0;
  double product = 0.0;  ///< rho_L * rho_M
  double discrepancy = 0.0;  ///< |rho_F - product|
  double ratio = 0.0;        ///< rho_F / product, NaN when product is 0
};

/// Compares rho(F(t)) with rho(L(t)) rho(M(t)). Diagnostic only.
/// Throws Error(DivergentSeries).
Eqn6Report check_eqn6(const MetricGraph& graph, std::span<const Attachment> attachments, double t,
                      const GenFunOptions& options = {});

// ---------------------------------------------------------------------------
// Asymptotics

enum class ConstantMethod { Resolvent, Counting };

const char* to_string(ConstantMethod method) noexcept;

struct ConstantOptions {
  /// Resolvent ladder t_k = h (1 + 0.1 * 2^-k), k = 0..ladder.
  int ladder = 8;
  /// Counting horizon; 0 picks the largest horizon that fits the cap.
  double horizon = 0.0;
  std::size_t cap = kDefaultCap;
  GenFunOptions genfun{};
};

struct ConstantEstimate {
  ConstantMethod method = ConstantMethod::Resolvent;
  double h = 0.0;
  double C_xx = 0.0;
  double C_yy = 0.0;
  double C_xy = 0.0;
  /// (sqrt(C_xx C_yy) + C_xy) h
  double C = 0.0;
  bool disconnected = false;
  /// Counting only: horizon used.
  double horizon = 0.0;
};

/// Pole constant of f_zw(t) ~ C_zw t / (t - h) at t -> h+ for the pairs
/// (x,x), (y,y), (x,y), by Richardson extrapolation along a ladder of t, or by
/// averaging N_zw(r) e^{-hr} over the upper half of an enumerated range.
/// x and y in different components give zeros with `disconnected` set.
/// Throws Error(Precondition) unless the component of x is hyperbolic.
ConstantEstimate estimate_constant_C(const MetricGraph& graph, VertexId x, VertexId y,
                                     ConstantMethod method = ConstantMethod::Resolvent,
                                     const ConstantOptions& options = {});

/// Relative disagreement above which two C estimates are flagged.
constexpr double kConstantWarnRatio = 0.2;

/// |a - b| / max(|a|, |b|); 0 when both vanish.
double relative_gap(double a, double b) noexcept;

struct ConstantCrossCheck {
  ConstantEstimate resolvent;
  ConstantEstimate counting;
  double gap = 0.0;  ///< relative_gap of the two combined constants
  bool disagree = false;  ///< gap > kConstantWarnRatio
  std::string warning;    ///< empty unless `disagree`
};

/// Runs both estimators and explains a disagreement in `warning`.
ConstantCrossCheck cross_check_constant(const MetricGraph& graph, VertexId x, VertexId y,
                                        const ConstantOptions& options = {});

/// h + C e^{-h l}
double predict_edge_asymptotic(double h, double C, double l);

struct AsymptoticSample {
  double l = 0.0;
  double h_prime = 0.0;
  double observed = 0.0;   ///< h' - h
  double predicted = 0.0;  ///< C e^{-hl}
  double scaled = 0.0;     ///< (h' - h) e^{hl}
};

struct AsymptoticFit {
  double h = 0.0;
  double C = 0.0;
  /// Exponent of the error term, from the last two samples, clamped to [0, 1].
  double gamma = 0.0;
  std::vector<AsymptoticSample> samples;  ///< sorted by l
};

/// Runs entropy_after_edge for every length and compares with the prediction.
AsymptoticFit edge_asymptotic_sweep(const MetricGraph& graph, VertexId x, VertexId y,
                                    std::vector<double> lengths, double C,
                                    const IncrementalOptions& options = {});

struct VertexAsymptotic {
  double h = 0.0;
  double L_norm = 0.0;  ///< rho(L(h))
  /// Calibrated from the pole constants K of f_{v_i v_j}:
  /// C = h rho(diag(e^{-l h}) K diag(e^{-l h}) (J - I)) / rho(L(h)).
  double C = 0.0;
  double predicted = 0.0;  ///< h + C rho(L(h))
  Eigen::MatrixXd K;
};

VertexAsymptotic predict_vertex_asymptotic(const MetricGraph& graph,
                                           std::span<const Attachment> attachments,
                                           const ConstantOptions& options = {});

}  // namespace entrograph
