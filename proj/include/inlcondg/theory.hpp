#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "inlcondg/core.hpp"

namespace inlcondg {

/// Holder-type majorant f(t) = K t^{p+1}/(p+1) - t on [0, inf).
struct HolderMajorant {
  double K = 1.0;
  double p = 1.0;
};

/// Smale-type majorant f(t) = t/(1 - gamma t) - 2t on [0, 1/gamma).
struct SmaleMajorant {
  double gamma = 1.0;
};

/// Scalar majorant function with its derivative and radii.
class MajorantFunction {
 public:
  using Kind = std::variant<HolderMajorant, SmaleMajorant>;

  MajorantFunction(HolderMajorant h) : kind_(h) {  // NOLINT
    if (!(h.K > 0.0) || !std::isfinite(h.K)) throw std::invalid_argument("holder majorant: K must be positive");
    if (!(h.p > 0.0 && h.p <= 1.0)) throw std::invalid_argument("holder majorant: p must lie in (0, 1]");
  }
  MajorantFunction(SmaleMajorant s) : kind_(s) {  // NOLINT
    if (!(s.gamma > 0.0) || !std::isfinite(s.gamma)) throw std::invalid_argument("smale majorant: gamma must be positive");
  }

  const Kind& kind() const { return kind_; }

  double operator()(double t) const {
    if (const auto* h = std::get_if<HolderMajorant>(&kind_)) return h->K * std::pow(t, h->p + 1.0) / (h->p + 1.0) - t;
    const double g = std::get<SmaleMajorant>(kind_).gamma;
    return t / (1.0 - g * t) - 2.0 * t;
  }

  double derivative(double t) const {
    if (const auto* h = std::get_if<HolderMajorant>(&kind_)) return h->K * std::pow(t, h->p) - 1.0;
    const double g = std::get<SmaleMajorant>(kind_).gamma;
    const double q = 1.0 - g * t;
    return 1.0 / (q * q) - 2.0;
  }

  /// Domain bound R.
  double domain_bound() const {
    if (std::holds_alternative<HolderMajorant>(kind_)) return kInf;
    return 1.0 / std::get<SmaleMajorant>(kind_).gamma;
  }

  /// sup{t in [0, R): f'(t) < 0}.
  double nu() const {
    if (const auto* h = std::get_if<HolderMajorant>(&kind_)) return std::pow(1.0 / h->K, 1.0 / h->p);
    const double g = std::get<SmaleMajorant>(kind_).gamma;
    return (std::sqrt(2.0) - 1.0) / (std::sqrt(2.0) * g);
  }

  /// Exponent p for which t -> (f(t)/f'(t) - t)/t^{p+1} is increasing.
  double order() const {
    if (const auto* h = std::get_if<HolderMajorant>(&kind_)) return h->p;
    return 1.0;
  }

 private:
  Kind kind_;
};

/// Newton iteration map t - f(t)/f'(t), defined for 0 < t < nu.
inline double nf(const MajorantFunction& f, double t) {
  if (!(t > 0.0 && t < f.nu())) throw std::invalid_argument("nf: t must lie in (0, nu)");
  return t - f(t) / f.derivative(t);
}

struct RadiusBreakdown {
  double nu = 0.0;
  double rho = 0.0;
  double sigma = 0.0;
  double kappa = kInf;
};

namespace detail {

inline void require_valid(const TheoryParams& tp) {
  if (auto v = theory_params_violation(tp)) throw std::invalid_argument("invalid theory parameters: " + *v);
}

/// omega1 (1+vartheta)(1+lambda)
inline double nf_coefficient(const TheoryParams& tp) { return tp.omega1 * (1.0 + tp.vartheta) * (1.0 + tp.lambda); }

/// omega1 [(1+vartheta) lambda + vartheta] + omega2
inline double linear_coefficient(const TheoryParams& tp) {
  return tp.omega1 * ((1.0 + tp.vartheta) * tp.lambda + tp.vartheta) + tp.omega2;
}

}  // namespace detail

/// Convergence radii for the Holder class.
inline RadiusBreakdown holder_radius(double K, double p, const TheoryParams& tp, double kappa = kInf) {
  detail::require_valid(tp);
  const MajorantFunction f(HolderMajorant{K, p});
  if (!(kappa > 0.0)) throw std::invalid_argument("holder_radius: kappa must be positive");
  const double q = (1.0 + tp.vartheta) * tp.lambda + tp.vartheta;
  const double num = (1.0 - tp.omega1 * q - tp.omega2) * (p + 1.0);
  const double den = K * (p - tp.omega1 * (q - p) - tp.omega2 * (p + 1.0) + 1.0);
  RadiusBreakdown r;
  r.nu = f.nu();
  r.rho = std::pow(num / den, 1.0 / p);
  r.kappa = kappa;
  r.sigma = std::min(kappa, r.rho);
  return r;
}

/// Convergence radii for the Smale class.
inline RadiusBreakdown smale_radius(double gamma, const TheoryParams& tp, double kappa = kInf) {
  detail::require_valid(tp);
  const MajorantFunction f(SmaleMajorant{gamma});
  if (!(kappa > 0.0)) throw std::invalid_argument("smale_radius: kappa must be positive");
  const double a = tp.omega1 * (1.0 + tp.vartheta) * (1.0 - 3.0 * tp.lambda) + 4.0 * (1.0 - tp.omega1 * tp.vartheta - tp.omega2);
  const double b = 1.0 - tp.omega1 * ((1.0 + tp.vartheta) * tp.lambda + tp.vartheta) - tp.omega2;
  const double disc = a * a - 8.0 * b * b;
  if (disc < 0.0) throw std::invalid_argument("smale_radius: a^2 < 8 b^2");
  RadiusBreakdown r;
  r.nu = f.nu();
  // (a - sqrt(a^2 - 8b^2)) / (4 gamma b), rationalized to avoid cancellation
  r.rho = 2.0 * b / (gamma * (a + std::sqrt(disc)));
  r.kappa = kappa;
  r.sigma = std::min(kappa, r.rho);
  return r;
}

inline RadiusBreakdown radius(const MajorantFunction& f, const TheoryParams& tp, double kappa = kInf) {
  if (const auto* h = std::get_if<HolderMajorant>(&f.kind())) return holder_radius(h->K, h->p, tp, kappa);
  return smale_radius(std::get<SmaleMajorant>(f.kind()).gamma, tp, kappa);
}

/// Majorant comparison sequence t_0, t_1, ... bounding ||x_k - x*||.
/// Stops early once t_k reaches exactly zero.
inline std::vector<double> majorant_sequence(const MajorantFunction& f, const TheoryParams& tp,
                                             const ThetaSchedule& theta, double t0, int kmax,
                                             double kappa = kInf) {
  const RadiusBreakdown rb = radius(f, tp, kappa);
  if (!(t0 > 0.0 && t0 < rb.sigma)) throw std::invalid_argument("majorant_sequence: t0 must lie in (0, sigma)");
  if (theta.max() > tp.lambda * tp.lambda / 2.0 || theta.min() < 0.0)
    throw std::invalid_argument("majorant_sequence: theta_k must lie in [0, lambda^2/2]");
  std::vector<double> t{t0};
  t.reserve(static_cast<std::size_t>(kmax) + 1);
  for (int k = 0; k < kmax && t.back() > 0.0; ++k) {
    const double tk = t.back();
    const double sq = std::sqrt(2.0 * theta(static_cast<std::size_t>(k)));
    const double a = tp.omega1 * (1.0 + tp.vartheta) * (1.0 + sq);
    const double b = tp.omega1 * ((1.0 + tp.vartheta) * sq + tp.vartheta) + tp.omega2;
    t.push_back(a * std::abs(nf(f, tk)) + b * tk);
  }
  return t;
}

struct RateDiagnostic {
  std::vector<double> errors;  // e_k = ||x_k - x*||, entries below the rounding floor dropped
  std::vector<double> ratios;  // e_{k+1}/e_k
  std::vector<double> quadratic_ratios;  // e_{k+1}/e_k^2
  double tail_max_ratio = 0.0;  // max over the last 5 ratios
  double rate_cap = 0.0;  // omega1[(1+vartheta) sqrt(2 theta) + vartheta] + omega2
  double rate_slack = 0.1;
  bool tail_within_cap = true;
  bool settled_within_cap = true;  // every ratio with e_k < 0.1 sigma is within cap + slack
  bool bound_applicable = false;  // e_0 < nu
  bool bound_holds = true;  // the p+1 order bound at every step
  std::vector<double> envelope;  // t_k
  bool envelope_holds = true;  // e_k <= t_k + 1e-12
};

/// Compares a converged run against the asymptotic-rate, order-(p+1) and
/// majorant-envelope bounds.
inline RateDiagnostic rate_check(const RunReport& report, const Vector& x_star, const MajorantFunction& f,
                                 const TheoryParams& tp, double theta_bar) {
  if (report.status != RunStatus::converged) throw std::invalid_argument("rate_check: run did not converge");
  detail::require_valid(tp);
  constexpr double kFloor = 1e-14;
  RateDiagnostic d;
  for (const Vector& x : report.iterates) {
    const double e = (x - x_star).norm();
    if (e < kFloor) break;
    d.errors.push_back(e);
  }
  d.rate_cap = tp.omega1 * ((1.0 + tp.vartheta) * std::sqrt(2.0 * theta_bar) + tp.vartheta) + tp.omega2;
  if (d.errors.size() < 2) return d;

  for (std::size_t k = 0; k + 1 < d.errors.size(); ++k) {
    d.ratios.push_back(d.errors[k + 1] / d.errors[k]);
    d.quadratic_ratios.push_back(d.errors[k + 1] / (d.errors[k] * d.errors[k]));
  }
  const std::size_t tail = std::min<std::size_t>(5, d.ratios.size());
  d.tail_max_ratio = *std::max_element(d.ratios.end() - static_cast<std::ptrdiff_t>(tail), d.ratios.end());
  d.tail_within_cap = d.tail_max_ratio <= d.rate_cap + d.rate_slack;
  const double sigma = radius(f, tp).sigma;
  for (std::size_t k = 0; k < d.ratios.size(); ++k)
    if (d.errors[k] < 0.1 * sigma && d.ratios[k] > d.rate_cap + d.rate_slack) d.settled_within_cap = false;

  const double e0 = d.errors.front();
  const double p = f.order();
  d.bound_applicable = e0 < f.nu();
  if (d.bound_applicable) {
    const double lead = detail::nf_coefficient(tp) * (f(e0) / f.derivative(e0) - e0);
    const double lin = detail::linear_coefficient(tp);
    for (std::size_t k = 0; k + 1 < d.errors.size(); ++k) {
      const double bound = lead * std::pow(d.errors[k] / e0, p + 1.0) + lin * d.errors[k];
      if (d.errors[k + 1] > bound * (1.0 + 1e-12) + 1e-15) d.bound_holds = false;
    }
  }

  if (theta_bar <= tp.lambda * tp.lambda / 2.0 && e0 < sigma) {
    d.envelope = majorant_sequence(f, tp, ThetaSchedule(theta_bar), e0, static_cast<int>(d.errors.size()));
    for (std::size_t k = 0; k < d.errors.size(); ++k) {
      const double tk = k < d.envelope.size() ? d.envelope[k] : 0.0;
      if (d.errors[k] > tk + 1e-12) d.envelope_holds = false;
    }
  } else {
    d.envelope_holds = false;
  }
  return d;
}

}  // namespace inlcondg
