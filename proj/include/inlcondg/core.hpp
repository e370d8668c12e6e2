#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "inlcondg/feasible_set.hpp"

namespace inlcondg {

/// Row-wise sparsity structure of a Jacobian. Column indices are kept
/// sorted within each row.
class SparsityPattern {
 public:
  SparsityPattern() = default;
  explicit SparsityPattern(std::vector<std::vector<Index>> rows) : rows_(std::move(rows)) {
    for (auto& r : rows_) {
      std::sort(r.begin(), r.end());
      r.erase(std::unique(r.begin(), r.end()), r.end());
      for (Index j : r)
        if (j < 0 || j >= size()) throw std::invalid_argument("SparsityPattern: column out of range");
    }
  }

  static SparsityPattern dense(Index n) {
    std::vector<std::vector<Index>> rows(static_cast<std::size_t>(n));
    for (auto& r : rows) {
      r.resize(static_cast<std::size_t>(n));
      for (Index j = 0; j < n; ++j) r[static_cast<std::size_t>(j)] = j;
    }
    return SparsityPattern(std::move(rows));
  }

  /// Band with `below` sub-diagonals and `above` super-diagonals.
  static SparsityPattern banded(Index n, Index below, Index above) {
    std::vector<std::vector<Index>> rows(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i)
      for (Index j = std::max<Index>(0, i - below); j <= std::min(n - 1, i + above); ++j)
        rows[static_cast<std::size_t>(i)].push_back(j);
    return SparsityPattern(std::move(rows));
  }

  static SparsityPattern diagonal(Index n) { return banded(n, 0, 0); }

  /// Entries with |M_ij| > threshold.
  static SparsityPattern from_matrix(const Matrix& m, double threshold) {
    std::vector<std::vector<Index>> rows(static_cast<std::size_t>(m.rows()));
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < m.cols(); ++j)
        if (std::abs(m(i, j)) > threshold) rows[static_cast<std::size_t>(i)].push_back(j);
    return SparsityPattern(std::move(rows));
  }

  Index size() const { return static_cast<Index>(rows_.size()); }
  const std::vector<Index>& row(Index i) const { return rows_[static_cast<std::size_t>(i)]; }

  bool contains(Index i, Index j) const {
    const auto& r = row(i);
    return std::binary_search(r.begin(), r.end(), j);
  }

  std::size_t nonzeros() const {
    std::size_t nnz = 0;
    for (const auto& r : rows_) nnz += r.size();
    return nnz;
  }

  /// Zeroes every entry of m outside the pattern.
  void mask(Matrix& m) const {
    for (Index i = 0; i < m.rows(); ++i) {
      const auto& r = row(i);
      auto it = r.begin();
      for (Index j = 0; j < m.cols(); ++j) {
        if (it != r.end() && *it == j) {
          ++it;
        } else {
          m(i, j) = 0.0;
        }
      }
    }
  }

  /// True when m has no nonzero entry outside the pattern.
  bool respects(const Matrix& m) const {
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < m.cols(); ++j)
        if (m(i, j) != 0.0 && !contains(i, j)) return false;
    return true;
  }

 private:
  std::vector<std::vector<Index>> rows_;
};

using ResidualFn = std::function<Vector(const Vector&)>;
using JacobianFn = std::function<Matrix(const Vector&)>;

/// A constrained system F(x) = 0, x in C.
struct Problem {
  std::string name;
  Index n = 0;
  ResidualFn eval;
  JacobianFn jacobian;  // empty when no analytic Jacobian is available
  std::optional<SparsityPattern> pattern;
  FeasibleSet set;
  std::optional<Vector> known_root;

  bool has_jacobian() const { return static_cast<bool>(jacobian); }
};

/// Checks the Problem invariants on the given sample points; throws
/// std::invalid_argument naming the first violation.
inline void check_problem(const Problem& p, std::span<const Vector> samples) {
  if (p.n <= 0) throw std::invalid_argument(p.name + ": dimension must be positive");
  if (p.set.dim() != p.n) throw std::invalid_argument(p.name + ": feasible set dimension mismatch");
  if (!p.eval) throw std::invalid_argument(p.name + ": missing residual map");
  for (const Vector& x : samples) {
    const Vector fx = p.eval(x);
    if (fx.size() != p.n) throw std::invalid_argument(p.name + ": eval(x) has wrong length");
    if (p.pattern && p.has_jacobian()) {
      const Matrix jx = p.jacobian(x);
      const double scale = std::max(1.0, jx.cwiseAbs().maxCoeff());
      for (Index i = 0; i < p.n; ++i)
        for (Index j = 0; j < p.n; ++j)
          if (!p.pattern->contains(i, j) && std::abs(jx(i, j)) > 1e-12 * scale)
            throw std::invalid_argument(p.name + ": Jacobian entry outside sparsity pattern");
    }
  }
  if (p.known_root) {
    if (p.known_root->size() != p.n) throw std::invalid_argument(p.name + ": known root has wrong length");
    if (p.eval(*p.known_root).lpNorm<Eigen::Infinity>() > 1e-10)
      throw std::invalid_argument(p.name + ": known root is not a root");
  }
}

enum class JacobianStrategy { exact, finite_difference, schubert };
enum class LinSolveMode { direct, inexact };

inline std::string_view to_string(JacobianStrategy s) {
  switch (s) {
    case JacobianStrategy::exact: return "exact";
    case JacobianStrategy::finite_difference: return "fd";
    case JacobianStrategy::schubert: return "schubert";
  }
  return "?";
}

/// Per-iteration CondG error parameter theta_k. A constant, or a schedule
/// whose last entry repeats past its end.
class ThetaSchedule {
 public:
  ThetaSchedule(double constant = 1e-5) : values_{constant} {}  // NOLINT: implicit by intent
  explicit ThetaSchedule(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("ThetaSchedule: empty schedule");
  }

  double operator()(std::size_t k) const { return values_[std::min(k, values_.size() - 1)]; }
  double max() const { return *std::max_element(values_.begin(), values_.end()); }
  double min() const { return *std::min_element(values_.begin(), values_.end()); }
  bool is_constant() const { return values_.size() == 1; }

 private:
  std::vector<double> values_;
};

/// eta_k = eta for every k.
struct ConstantForcing {
  double eta = 0.0;
};
/// eta_k = min(eta_max, c * ||F(x_k)||).
struct AdaptiveForcing {
  double c = 1.0;
  double eta_max = 0.1;
};
using ForcingPolicy = std::variant<ConstantForcing, AdaptiveForcing>;

struct SolverConfig {
  double tol_inf = 1e-6;
  int max_outer = 300;
  ThetaSchedule theta{1e-5};
  int max_condg = 300;
  JacobianStrategy jacobian_strategy = JacobianStrategy::finite_difference;
  int refresh_period = 5;
  LinSolveMode linsolve = LinSolveMode::direct;
  ForcingPolicy forcing = ConstantForcing{0.0};
  int no_progress_window = 10;
  double no_progress_factor = 0.9;
  // Start CondG at y_k instead of x_k whenever y_k is already feasible.
  bool feasible_warm_start = true;
};

/// The (omega1, omega2, vartheta, lambda) constants bounding M_k, r_k and theta_k.
struct TheoryParams {
  double omega1 = 1.0;
  double omega2 = 0.0;
  double vartheta = 0.0;
  double lambda = 0.0;

  /// Upper end of the admissible lambda interval.
  double lambda_bound() const { return (1.0 - omega2 - omega1 * vartheta) / (omega1 * (1.0 + vartheta)); }
};

/// Name of the first violated TheoryParams inequality, if any.
inline std::optional<std::string> theory_params_violation(const TheoryParams& tp) {
  if (!(tp.vartheta >= 0.0 && tp.vartheta < 1.0)) return "0 <= vartheta < 1";
  if (!(tp.omega2 >= 0.0)) return "0 <= omega2";
  if (!(tp.omega2 < tp.omega1)) return "omega2 < omega1";
  if (!(tp.omega1 * tp.vartheta + tp.omega2 < 1.0)) return "omega1*vartheta + omega2 < 1";
  if (!(tp.lambda >= 0.0)) return "0 <= lambda";
  if (!(tp.lambda < tp.lambda_bound())) return "lambda < (1 - omega2 - omega1*vartheta)/(omega1*(1 + vartheta))";
  return std::nullopt;
}

/// Name of the first violated constraint on the solver configuration alone.
inline std::optional<std::string> solver_config_violation(const SolverConfig& cfg) {
  if (!(cfg.tol_inf > 0.0)) return "tol_inf > 0";
  if (cfg.max_outer < 1) return "max_outer >= 1";
  if (!(cfg.theta.min() >= 0.0)) return "theta >= 0";
  if (cfg.max_condg < 1) return "max_condg >= 1";
  if (cfg.refresh_period < 1) return "refresh_period >= 1";
  if (cfg.no_progress_window < 1) return "no_progress_window >= 1";
  if (!(cfg.no_progress_factor > 0.0 && cfg.no_progress_factor < 1.0)) return "0 < no_progress_factor < 1";
  return std::nullopt;
}

/// First violated inequality for the pair (cfg, tp), including
/// theta_k <= lambda^2/2 for every k.
inline std::optional<std::string> config_violation(const SolverConfig& cfg, const TheoryParams& tp) {
  if (auto v = solver_config_violation(cfg)) return v;
  if (auto v = theory_params_violation(tp)) return v;
  if (!(cfg.theta.max() <= tp.lambda * tp.lambda / 2.0)) return "theta <= lambda^2/2";
  return std::nullopt;
}

/// Throws std::invalid_argument naming the first violated inequality.
inline const SolverConfig& validate_config(const SolverConfig& cfg, const TheoryParams& tp) {
  if (auto v = config_violation(cfg, tp)) throw std::invalid_argument("invalid configuration: " + *v);
  return cfg;
}

enum class RunStatus { converged, max_iterations, no_progress, linear_solve_failure };

inline std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::converged: return "converged";
    case RunStatus::max_iterations: return "max_iterations";
    case RunStatus::no_progress: return "no_progress";
    case RunStatus::linear_solve_failure: return "linear_solve_failure";
  }
  return "?";
}

struct RunReport {
  RunStatus status = RunStatus::max_iterations;
  std::vector<Vector> iterates;
  std::vector<double> residual_norms;  // ||F(x_k)||_inf, one per iterate
  std::vector<int> condg_iters;        // one per outer step
  std::vector<double> newton_steps;    // ||s_k||, one per outer step
  std::vector<double> linear_residuals;  // ||r_k|| / ||F(x_k)||, one per outer step
  int condg_cap_hits = 0;
  bool start_projected = false;
  std::string message;

  int outer_iterations() const { return static_cast<int>(newton_steps.size()); }
  double final_residual() const { return residual_norms.empty() ? kInf : residual_norms.back(); }
  const Vector& final_iterate() const { return iterates.back(); }
};

}  // namespace inlcondg
