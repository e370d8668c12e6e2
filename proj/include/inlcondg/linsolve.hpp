#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "inlcondg/core.hpp"

namespace inlcondg {

/// Raised when M_k is singular to working precision or the inexact
/// residual contract cannot be met within the iteration budget.
class LinearSolveFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Step s with M s = -F(x_k) + r.
struct LinSolveOutcome {
  Vector s;
  Vector r;  // M s + F(x_k), recomputed after the solve
  double eta_used = 0.0;  // ||r|| / ||F(x_k)||
  int iterations = 0;  // Krylov iterations; 0 for a direct solve
};

namespace detail {

inline LinSolveOutcome finish(const Matrix& m, const Vector& fx, Vector s, int iterations) {
  LinSolveOutcome out;
  out.r = m * s + fx;
  out.s = std::move(s);
  const double fnorm = fx.norm();
  out.eta_used = fnorm > 0.0 ? out.r.norm() / fnorm : 0.0;
  out.iterations = iterations;
  return out;
}

inline Eigen::PartialPivLU<Matrix> checked_lu(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw LinearSolveFailure("matrix must be square and non-empty");
  if (!m.allFinite()) throw LinearSolveFailure("matrix has non-finite entries");
  const double maxabs = m.cwiseAbs().maxCoeff();
  if (maxabs == 0.0) throw LinearSolveFailure("matrix is zero");
  Eigen::PartialPivLU<Matrix> lu(m);
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (min_pivot < 1e-14 * maxabs)
    throw LinearSolveFailure("matrix is singular to working precision (pivot " + std::to_string(min_pivot) + ")");
  return lu;
}

inline Vector start_vector(Index n) {
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = dist(rng);
  return v.normalized();
}

/// Largest eigenvalue of a symmetric positive semidefinite operator by
/// power iteration.
template <typename Apply>
double power_iteration(Index n, Apply&& apply, double tol, int max_iter) {
  Vector v = start_vector(n);
  double est = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector w = apply(v);
    const double next = w.norm();
    if (next == 0.0) return 0.0;
    v = w / next;
    if (std::abs(next - est) <= tol * next) return next;
    est = next;
  }
  return est;
}

}  // namespace detail

/// Solves M s = -F(x_k) by LU with partial pivoting.
inline LinSolveOutcome solve_direct(const Matrix& m, const Vector& fx) {
  if (fx.size() != m.rows()) throw std::invalid_argument("solve_direct: dimension mismatch");
  const auto lu = detail::checked_lu(m);
  Vector s = lu.solve(-fx);
  if (!s.allFinite()) throw LinearSolveFailure("direct solve produced non-finite step");
  return detail::finish(m, fx, std::move(s), 0);
}

struct GmresOptions {
  int restart = 500;  // clamped to n; short restarts stall on the ill-conditioned benchmark Jacobians
  int max_iterations = 0;  // 0: 10 * n, at least 200
};

/// Returns s with ||M s + F(x_k)|| <= eta * ||F(x_k)|| (Euclidean norm),
/// using restarted GMRES from s = 0. eta == 0 falls back to solve_direct.
inline LinSolveOutcome solve_inexact(const Matrix& m, const Vector& fx, double eta, GmresOptions opts = {}) {
  if (!(eta >= 0.0 && eta < 1.0)) throw std::invalid_argument("solve_inexact: eta must lie in [0, 1)");
  if (fx.size() != m.rows() || m.rows() != m.cols()) throw std::invalid_argument("solve_inexact: dimension mismatch");
  if (eta == 0.0) return solve_direct(m, fx);
  if (!m.allFinite()) throw LinearSolveFailure("matrix has non-finite entries");

  const Index n = m.rows();
  const Vector b = -fx;
  const double target = eta * fx.norm();
  const int restart = static_cast<int>(std::clamp<Index>(opts.restart, 1, n));
  const int budget = opts.max_iterations > 0 ? opts.max_iterations : static_cast<int>(std::max<Index>(10 * n, 200));

  Vector s = Vector::Zero(n);
  Matrix basis(n, restart + 1);
  Matrix hess = Matrix::Zero(restart + 1, restart);
  Vector g(restart + 1), cs(restart), sn(restart);
  int total = 0;

  while (true) {
    Vector r = b - m * s;
    const double beta = r.norm();
    if (beta <= target) return detail::finish(m, fx, std::move(s), total);
    if (total >= budget)
      throw LinearSolveFailure("GMRES did not reach relative residual " + std::to_string(eta));

    hess.setZero();
    g.setZero();
    g[0] = beta;
    basis.col(0) = r / beta;
    int k = 0;
    for (int j = 0; j < restart && total < budget; ++j) {
      Vector w = m * basis.col(j);
      for (int i = 0; i <= j; ++i) {
        hess(i, j) = w.dot(basis.col(i));
        w -= hess(i, j) * basis.col(i);
      }
      const double hnext = w.norm();
      hess(j + 1, j) = hnext;
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * hess(i, j) + sn[i] * hess(i + 1, j);
        hess(i + 1, j) = -sn[i] * hess(i, j) + cs[i] * hess(i + 1, j);
        hess(i, j) = t;
      }
      const double den = std::hypot(hess(j, j), hess(j + 1, j));
      cs[j] = den > 0.0 ? hess(j, j) / den : 1.0;
      sn[j] = den > 0.0 ? hess(j + 1, j) / den : 0.0;
      hess(j, j) = den;
      hess(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      ++total;
      k = j + 1;
      if (std::abs(g[j + 1]) <= target || hnext <= 1e-300) break;
      basis.col(j + 1) = w / hnext;
    }
    if (k == 0) continue;
    const Vector y = hess.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    if (!y.allFinite()) throw LinearSolveFailure("GMRES least-squares update is non-finite");
    s += basis.leftCols(k) * y;
  }
}

/// Spectral norm ||A||_2 by power iteration on A^T A.
inline double spectral_norm(const Matrix& a, double tol = 1e-8, int max_iter = 5000) {
  if (a.size() == 0) return 0.0;
  const double lam = detail::power_iteration(
      a.cols(), [&](const Vector& v) -> Vector { return a.transpose() * (a * v); }, tol, max_iter);
  return std::sqrt(lam);
}

/// cond_2(M) estimated as ||M|| * ||M^{-1}||, both by power iteration.
inline double condition_estimate(const Matrix& m, double tol = 1e-8, int max_iter = 5000) {
  const auto lu = detail::checked_lu(m);
  const double inv_lam = detail::power_iteration(
      m.cols(),
      [&](const Vector& v) -> Vector { return lu.transpose().solve(Vector(lu.solve(v))); },
      tol, max_iter);
  return spectral_norm(m, tol, max_iter) * std::sqrt(inv_lam);
}

/// eta_k from the forcing policy. When `cond_estimate` is given, the
/// result is additionally capped at vartheta / cond_estimate.
inline double forcing_eta(int k, double resnorm, const ForcingPolicy& policy,
                          std::optional<double> vartheta = std::nullopt,
                          std::optional<double> cond_estimate = std::nullopt) {
  (void)k;
  if (!(resnorm >= 0.0)) throw std::invalid_argument("forcing_eta: residual norm must be non-negative");
  double eta = std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConstantForcing>) return p.eta;
        else return std::min(p.eta_max, p.c * resnorm);
      },
      policy);
  eta = std::max(eta, 0.0);
  if (vartheta && cond_estimate && *cond_estimate > 0.0) eta = std::min(eta, *vartheta / *cond_estimate);
  return eta;
}

}  // namespace inlcondg
