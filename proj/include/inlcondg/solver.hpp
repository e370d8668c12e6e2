#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "inlcondg/condg.hpp"
#include "inlcondg/core.hpp"
#include "inlcondg/jacobian.hpp"
#include "inlcondg/linsolve.hpp"

namespace inlcondg {

/// CondG accuracy for the outer step: theta_k * ||s_k||^2.
inline double condg_epsilon(double theta_k, const Vector& s) {
  if (!(theta_k >= 0.0)) throw std::invalid_argument("condg_epsilon: theta must be non-negative");
  return theta_k * s.squaredNorm();
}

struct MkDiagnostic {
  double norm_minv_fp = 0.0;  // ||M^{-1} F'||
  double norm_minv_fp_minus_i = 0.0;  // ||M^{-1} F' - I||
  bool within_omega1 = false;
  bool within_omega2 = false;
};

/// Evaluates the two operator norms bounding M_k against F'(x_k). Diagnostic
/// only; throws LinearSolveFailure for singular M_k.
inline MkDiagnostic verify_mk_conditions(const Matrix& mk, const Matrix& fprime, const TheoryParams& tp) {
  if (mk.rows() != fprime.rows() || mk.cols() != fprime.cols())
    throw std::invalid_argument("verify_mk_conditions: dimension mismatch");
  const auto lu = detail::checked_lu(mk);
  const Matrix a = lu.solve(fprime);
  MkDiagnostic d;
  d.norm_minv_fp = spectral_norm(a);
  d.norm_minv_fp_minus_i = spectral_norm(a - Matrix::Identity(a.rows(), a.cols()));
  d.within_omega1 = d.norm_minv_fp <= tp.omega1;
  d.within_omega2 = d.norm_minv_fp_minus_i <= tp.omega2;
  return d;
}

/// Stagnation test over the residual history: the best residual of the
/// last `window` iterates fails to improve the best earlier one by `factor`.
inline bool residual_stagnated(const std::vector<double>& res, int window, double factor) {
  const auto w = static_cast<std::size_t>(window);
  if (res.size() <= w) return false;
  const auto split = res.end() - static_cast<std::ptrdiff_t>(w);
  const double best_before = *std::min_element(res.begin(), split);
  const double best_recent = *std::min_element(split, res.end());
  return best_recent > factor * best_before;
}

/// Runs the inexact Newton-like conditional gradient iteration from x0.
/// Solver failures are reported through RunReport::status.
inline RunReport solve(const Problem& problem, const Vector& x0, const SolverConfig& cfg) {
  if (auto v = solver_config_violation(cfg)) throw std::invalid_argument("invalid configuration: " + *v);
  if (x0.size() != problem.n) throw std::invalid_argument("solve: x0 has wrong dimension");
  if (!x0.allFinite()) throw std::invalid_argument("solve: x0 must be finite");

  RunReport report;
  Vector x = x0;
  if (!problem.set.contains(x, 1e-12)) {
    // seed the projection at the vertex farthest along x0
    const Vector start = problem.set.lmo(-x0);
    x = condg(problem.set, x0, start, 0.0, cfg.max_condg).z;
    report.start_projected = true;
  }

  JacobianState jac;
  jac.strategy = cfg.jacobian_strategy;
  Vector fx = problem.eval(x);
  std::optional<Vector> prev_x, prev_fx;

  for (int k = 0;; ++k) {
    report.iterates.push_back(x);
    if (!fx.allFinite()) {
      report.residual_norms.push_back(kInf);
      report.status = RunStatus::no_progress;
      report.message = "non-finite residual";
      return report;
    }
    const double res = fx.lpNorm<Eigen::Infinity>();
    report.residual_norms.push_back(res);
    if (res <= cfg.tol_inf) {
      report.status = RunStatus::converged;
      return report;
    }
    if (k >= cfg.max_outer) {
      report.status = RunStatus::max_iterations;
      return report;
    }
    if (residual_stagnated(report.residual_norms, cfg.no_progress_window, cfg.no_progress_factor)) {
      report.status = RunStatus::no_progress;
      report.message = "residual stagnated";
      return report;
    }

    LinSolveOutcome step;
    try {
      std::optional<SecantPair> secant;
      if (prev_x) secant = SecantPair{x - *prev_x, fx - *prev_fx};
      jac = next_jacobian(std::move(jac), k, problem, x, fx, secant, cfg.refresh_period);
      if (cfg.linsolve == LinSolveMode::direct) {
        step = solve_direct(jac.m, fx);
      } else {
        const double eta = forcing_eta(k, res, cfg.forcing);
        step = solve_inexact(jac.m, fx, std::min(eta, 1.0 - 1e-12));
      }
    } catch (const LinearSolveFailure& e) {
      report.status = RunStatus::linear_solve_failure;
      report.message = e.what();
      return report;
    }

    const double snorm = step.s.norm();
    report.newton_steps.push_back(snorm);
    report.linear_residuals.push_back(step.eta_used);
    if (snorm < 1e-15 * std::max(1.0, x.norm())) {
      report.condg_iters.push_back(0);
      report.status = RunStatus::no_progress;
      report.message = "vanishing Newton step";
      return report;
    }

    const Vector y = x + step.s;
    const auto theta_k = cfg.theta(static_cast<std::size_t>(k));
    const bool warm = cfg.feasible_warm_start && problem.set.contains(y, 0.0);
    const CondGResult cg = condg(problem.set, y, warm ? y : x, condg_epsilon(theta_k, step.s), cfg.max_condg);
    report.condg_iters.push_back(cg.inner_iters);
    if (cg.terminated_by == CondGStop::iteration_cap) ++report.condg_cap_hits;

    prev_x = x;
    prev_fx = fx;
    x = cg.z;
    fx = problem.eval(x);
  }
}

}  // namespace inlcondg
