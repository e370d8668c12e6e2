#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "inlcondg/core.hpp"
#include "inlcondg/linsolve.hpp"

namespace inlcondg {

/// Forward-difference Jacobian. Column j uses h_j = sqrt(eps) * max(|x_j|, 1)
/// carrying the sign of x_j (positive at zero). `fx` must equal F(x).
inline Matrix fd_jacobian(const ResidualFn& f, const Vector& x, const Vector& fx) {
  const Index n = x.size();
  const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  Matrix jac(fx.size(), n);
  Vector xp = x;
  for (Index j = 0; j < n; ++j) {
    const double h = (x[j] < 0.0 ? -1.0 : 1.0) * root_eps * std::max(std::abs(x[j]), 1.0);
    xp[j] = x[j] + h;
    const double step = xp[j] - x[j];  // the representable perturbation
    const Vector fp = f(xp);
    if (!fp.allFinite()) throw LinearSolveFailure("non-finite residual at finite-difference point");
    jac.col(j) = (fp - fx) / step;
    if (!jac.col(j).allFinite()) throw LinearSolveFailure("non-finite finite-difference column");
    xp[j] = x[j];
  }
  return jac;
}

inline Matrix fd_jacobian(const ResidualFn& f, const Vector& x) { return fd_jacobian(f, x, f(x)); }

/// Row-wise sparse secant update. For each row i with z^i = s masked to the
/// row's pattern and ||z^i|| > 0, adds (y_i - (M s)_i) z^i / ||z^i||^2.
inline Matrix schubert_update(const Matrix& m, const Vector& s, const Vector& yvec, const SparsityPattern& pattern) {
  if (m.rows() != pattern.size() || s.size() != m.cols() || yvec.size() != m.rows())
    throw std::invalid_argument("schubert_update: dimension mismatch");
  if (!pattern.respects(m)) throw std::invalid_argument("schubert_update: M has entries outside the pattern");
  Matrix out = m;
  const Vector ms = m * s;
  for (Index i = 0; i < m.rows(); ++i) {
    const auto& cols = pattern.row(i);
    double zz = 0.0;
    for (Index j : cols) zz += s[j] * s[j];
    if (zz == 0.0) continue;
    const double scale = (yvec[i] - ms[i]) / zz;
    for (Index j : cols) out(i, j) += scale * s[j];
  }
  return out;
}

struct JacobianState {
  Matrix m;
  int k_last_refresh = -1;
  JacobianStrategy strategy = JacobianStrategy::finite_difference;
  std::optional<SparsityPattern> pattern;  // schubert only
};

/// Secant pair between consecutive iterates.
struct SecantPair {
  Vector s;  // x_k - x_{k-1}
  Vector y;  // F(x_k) - F(x_{k-1})
};

/// True when the quasi-Newton strategy recomputes M_k by finite differences.
inline bool is_refresh_iteration(int k, int refresh_period) {
  return k == 0 || (k >= 1 && (k - 1) % refresh_period == 0);
}

/// Produces M_k. `fx` must equal F(x_k); `secant` is required for the
/// schubert strategy on non-refresh iterations.
inline JacobianState next_jacobian(JacobianState state, int k, const Problem& problem, const Vector& x,
                                   const Vector& fx, const std::optional<SecantPair>& secant,
                                   int refresh_period) {
  if (k < 0) throw std::invalid_argument("next_jacobian: k must be non-negative");
  if (refresh_period < 1) throw std::invalid_argument("next_jacobian: refresh period must be >= 1");
  switch (state.strategy) {
    case JacobianStrategy::exact:
      if (!problem.has_jacobian()) throw std::invalid_argument(problem.name + ": exact strategy needs an analytic Jacobian");
      state.m = problem.jacobian(x);
      state.k_last_refresh = k;
      break;
    case JacobianStrategy::finite_difference:
      state.m = fd_jacobian(problem.eval, x, fx);
      state.k_last_refresh = k;
      break;
    case JacobianStrategy::schubert:
      if (is_refresh_iteration(k, refresh_period) || state.m.size() == 0 || !secant) {
        Matrix jac = fd_jacobian(problem.eval, x, fx);
        if (!state.pattern) {
          if (problem.pattern) {
            state.pattern = problem.pattern;
          } else {
            const double maxabs = jac.size() ? jac.cwiseAbs().maxCoeff() : 0.0;
            state.pattern = SparsityPattern::from_matrix(jac, 1e-10 * maxabs);
          }
        }
        state.pattern->mask(jac);
        state.m = std::move(jac);
        state.k_last_refresh = k;
      } else {
        state.m = schubert_update(state.m, secant->s, secant->y, *state.pattern);
      }
      break;
  }
  if (!state.m.allFinite()) throw LinearSolveFailure("Jacobian approximation has non-finite entries");
  return state;
}

}  // namespace inlcondg
