#include "entrograph/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "entrograph/error.hpp"

namespace entrograph {

const char* to_string(WalkMode mode) noexcept {
  return mode == WalkMode::Backtracking ? "backtracking" : "non-backtracking";
}

Eigen::MatrixXd TransferPattern::at(double t) const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
  for (const auto& [d, e] : transitions) m(d, e) += std::exp(-t * length[e]);
  return m;
}

Eigen::MatrixXd TransferPattern::derivative_at(double t) const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size, size);
  for (const auto& [d, e] : transitions) m(d, e) -= length[e] * std::exp(-t * length[e]);
  return m;
}

void TransferPattern::successors(std::vector<std::size_t>& offset,
                                 std::vector<DartId>& succ) const {
  offset.assign(size + 1, 0);
  for (const auto& tr : transitions) ++offset[tr.first + 1];
  for (std::size_t i = 0; i < size; ++i) offset[i + 1] += offset[i];
  succ.resize(transitions.size());
  std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
  for (const auto& [d, e] : transitions) succ[fill[d]++] = e;
}

TransferPattern transfer_pattern(const MetricGraph& graph, WalkMode mode) {
  TransferPattern p;
  p.size = graph.dart_count();
  p.length.resize(p.size);
  for (DartId d = 0; d < p.size; ++d) p.length[d] = graph.dart(d).length;
  for (DartId d = 0; d < p.size; ++d) {
    const Dart& dd = graph.dart(d);
    for (DartId e : graph.out_darts(dd.head)) {
      if (mode == WalkMode::NonBacktracking && e == dd.reverse) continue;
      p.transitions.emplace_back(d, e);
    }
  }
  return p;
}

TransferMatrix build_transfer(const MetricGraph& graph, double t, WalkMode mode) {
  return {transfer_pattern(graph, mode).at(t), t, mode};
}

// ---------------------------------------------------------------------------
// Strongly connected components (iterative Tarjan)

std::vector<std::vector<std::size_t>> strongly_connected(const Eigen::MatrixXd& m) {
  const std::size_t n = static_cast<std::size_t>(m.rows());
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0), next_col(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack, call;
  std::vector<std::vector<std::size_t>> result;
  std::size_t counter = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.push_back(root);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      const std::size_t v = call.back();
      bool descended = false;
      while (next_col[v] < n) {
        const std::size_t w = next_col[v]++;
        if (!(m(v, w) > 0.0)) continue;
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back(w);
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      call.pop_back();
      if (!call.empty()) low[call.back()] = std::min(low[call.back()], low[v]);
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        result.push_back(std::move(comp));
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Perron data of an irreducible block

namespace {

struct BlockPerron {
  double rho = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  Eigen::VectorXd vec;
  int iterations = 0;
  bool converged = false;
};

// Power iteration on I + S/sigma (primitive whenever S is irreducible), with
// Collatz-Wielandt bounds evaluated on S itself so small spectral radii lose
// no precision. Stalled runs switch to repeated squaring of the iteration
// matrix; all quantities stay nonnegative so squaring introduces no
// cancellation.
BlockPerron perron_block(const Eigen::MatrixXd& s, const SpectralOptions& opt) {
  const Eigen::Index k = s.rows();
  BlockPerron out;
  if (k == 1) {
    out.rho = out.lower = out.upper = s(0, 0);
    out.vec = Eigen::VectorXd::Ones(1);
    out.converged = true;
    return out;
  }
  const double sigma = s.rowwise().sum().maxCoeff();
  Eigen::MatrixXd q = s / sigma;
  q.diagonal().array() += 1.0;

  const double eps = std::numeric_limits<double>::epsilon();
  const double tol = std::max(opt.tol, 32.0 * eps * std::sqrt(static_cast<double>(k)));
  const bool may_square = k <= 400;
  int squarings = 0;
  int since_square = 0;

  Eigen::VectorXd x = Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
  Eigen::VectorXd y(k);
  for (int it = 0; it <= opt.max_iter; ++it) {
    y.noalias() = s * x;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      const double r = y[i] / x[i];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    out.lower = lo;
    out.upper = hi;
    out.iterations = it;
    if (hi - lo <= tol * hi) {
      out.converged = true;
      break;
    }
    y.noalias() = q * x;
    x = y / y.sum();
    if (may_square && squarings < 60 && ++since_square >= 8) {
      q = (q * q).eval();
      q /= q.maxCoeff();
      ++squarings;
      since_square = 0;
    }
  }
  out.rho = 0.5 * (out.lower + out.upper);
  out.vec = x;
  return out;
}

}  // namespace

PerronData spectral_radius(const Eigen::MatrixXd& m, const SpectralOptions& opt) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::Precondition, "matrix is not square");
  const Eigen::Index n = m.rows();
  PerronData out;
  out.right = Eigen::VectorXd::Zero(n);
  out.left = Eigen::VectorXd::Zero(n);
  out.converged = true;
  if (n == 0) return out;

  const auto comps = strongly_connected(m);
  const std::vector<std::size_t>* best = nullptr;
  BlockPerron best_right;
  for (const auto& comp : comps) {
    const Eigen::Index k = static_cast<Eigen::Index>(comp.size());
    if (k == 1 && !(m(comp[0], comp[0]) > 0.0)) continue;
    Eigen::MatrixXd s(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b < k; ++b) s(a, b) = m(comp[a], comp[b]);
    BlockPerron r = perron_block(s, opt);
    out.iterations += r.iterations;
    if (!r.converged) {
      std::ostringstream os;
      os << "power iteration did not converge in " << opt.max_iter << " iterations (bounds ["
         << r.lower << ", " << r.upper << "])";
      throw Error(ErrorCode::NonConvergence, os.str());
    }
    if (best == nullptr || r.rho > best_right.rho) {
      best = &comp;
      best_right = std::move(r);
    }
  }
  if (best == nullptr) return out;

  out.rho = best_right.rho;
  out.lower = best_right.lower;
  out.upper = best_right.upper;
  const auto& comp = *best;
  const Eigen::Index k = static_cast<Eigen::Index>(comp.size());
  for (Eigen::Index a = 0; a < k; ++a) out.right[comp[a]] = best_right.vec[a];
  if (opt.want_left) {
    Eigen::MatrixXd st(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b < k; ++b) st(a, b) = m(comp[b], comp[a]);
    BlockPerron l = perron_block(st, opt);
    out.iterations += l.iterations;
    if (!l.converged) {
      throw Error(ErrorCode::NonConvergence, "left power iteration did not converge");
    }
    for (Eigen::Index a = 0; a < k; ++a) out.left[comp[a]] = l.vec[a];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Resolvent

Resolvent::Resolvent(const Eigen::MatrixXd& matrix, const ResolventOptions& options)
    : system_(matrix) {
  SpectralOptions so = options.spectral;
  so.want_left = false;
  rho_ = spectral_radius(matrix, so).rho;
  factor(options);
}

Resolvent::Resolvent(const Eigen::MatrixXd& matrix, double known_rho,
                     const ResolventOptions& options)
    : system_(matrix), rho_(known_rho) {
  factor(options);
}

void Resolvent::factor(const ResolventOptions& options) {
  if (!(rho_ < 1.0 - options.margin)) {
    std::ostringstream os;
    os.precision(17);
    os << "Neumann series diverges: spectral radius " << rho_ << " is not below 1 - "
       << options.margin;
    throw Error(ErrorCode::DivergentSeries, os.str());
  }
  system_ = -system_;
  system_.diagonal().array() += 1.0;
  lu_.compute(system_);
}

Eigen::MatrixXd Resolvent::solve_many(const Eigen::MatrixXd& rhs) const {
  Eigen::MatrixXd u = lu_.solve(rhs);
  for (int step = 0; step < 3; ++step) {
    const Eigen::MatrixXd r = rhs - system_ * u;
    const double scale = std::max(rhs.cwiseAbs().maxCoeff(), 1e-300);
    if (r.cwiseAbs().maxCoeff() <= 1e-15 * scale) break;
    u += lu_.solve(r);
  }
  return u;
}

Eigen::VectorXd Resolvent::solve(const Eigen::VectorXd& rhs) const {
  Eigen::MatrixXd r = rhs;
  return solve_many(r).col(0);
}

Eigen::VectorXd solve_resolvent(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& rhs,
                                const ResolventOptions& options) {
  return Resolvent(matrix, options).solve(rhs);
}

}  // namespace entrograph
