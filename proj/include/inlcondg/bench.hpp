#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "inlcondg/core.hpp"

namespace inlcondg::bench {

struct BenchEntry {
  std::string id;
  Index default_n = 0;
  double lower = 0.0;
  double upper = 0.0;
  bool core_suite = false;  // part of the mandatory box-constrained suite
  std::string description;
  std::function<Problem(Index)> builder;
};

namespace detail {

inline void require_size(std::string_view id, Index n) {
  if (n < 2) throw std::invalid_argument(std::string(id) + ": n must be >= 2");
}

/// Chandrasekhar H-equation, c = 0.99, midpoint rule with n nodes.
inline Problem h_equation(Index n) {
  require_size("pb1_h_equation", n);
  constexpr double c = 0.99;
  auto weights = std::make_shared<Matrix>(n, n);
  for (Index i = 0; i < n; ++i) {
    const double mi = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    for (Index j = 0; j < n; ++j) {
      const double mj = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
      (*weights)(i, j) = c * mi / (2.0 * static_cast<double>(n) * (mi + mj));
    }
  }
  Problem p{.name = "pb1_h_equation",
            .n = n,
            .eval = [weights](const Vector& h) -> Vector {
              const Vector sums = (*weights) * h;
              return h - (1.0 - sums.array()).inverse().matrix();
            },
            .jacobian = [weights](const Vector& h) -> Matrix {
              const Vector sums = (*weights) * h;
              const Vector scale = (1.0 - sums.array()).square().inverse();
              Matrix jac = -(scale.asDiagonal() * (*weights));
              jac.diagonal().array() += 1.0;
              return jac;
            },
            .pattern = SparsityPattern::dense(n),
            .set = FeasibleSet::uniform_box(n, 0.0, 5.0),
            .known_root = std::nullopt};
  return p;
}

/// Discrete boundary value function, h = 1/(n+1).
inline Problem discrete_boundary(Index n) {
  require_size("pb2_discrete_boundary", n);
  const double h = 1.0 / static_cast<double>(n + 1);
  Problem p{.name = "pb2_discrete_boundary",
            .n = n,
            .eval = [n, h](const Vector& x) -> Vector {
              Vector f(n);
              for (Index i = 0; i < n; ++i) {
                const double ti = static_cast<double>(i + 1) * h;
                const double left = i > 0 ? x[i - 1] : 0.0;
                const double right = i + 1 < n ? x[i + 1] : 0.0;
                const double w = x[i] + ti + 1.0;
                f[i] = 2.0 * x[i] - left - right + h * h * w * w * w / 2.0;
              }
              return f;
            },
            .jacobian = [n, h](const Vector& x) -> Matrix {
              Matrix jac = Matrix::Zero(n, n);
              for (Index i = 0; i < n; ++i) {
                const double ti = static_cast<double>(i + 1) * h;
                const double w = x[i] + ti + 1.0;
                jac(i, i) = 2.0 + 1.5 * h * h * w * w;
                if (i > 0) jac(i, i - 1) = -1.0;
                if (i + 1 < n) jac(i, i + 1) = -1.0;
              }
              return jac;
            },
            .pattern = SparsityPattern::banded(n, 1, 1),
            .set = FeasibleSet::uniform_box(n, -100.0, 100.0),
            .known_root = std::nullopt};
  return p;
}

/// Troesch problem with parameter 10 and boundary values 0 and 1.
inline Problem troesch(Index n) {
  require_size("pb3_troesch", n);
  constexpr double rho = 10.0;
  const double h = 1.0 / static_cast<double>(n + 1);
  Problem p{.name = "pb3_troesch",
            .n = n,
            .eval = [n, h](const Vector& x) -> Vector {
              Vector f(n);
              for (Index i = 0; i < n; ++i) {
                const double left = i > 0 ? x[i - 1] : 0.0;
                const double right = i + 1 < n ? x[i + 1] : 1.0;
                f[i] = 2.0 * x[i] - left - right + rho * h * h * std::sinh(rho * x[i]);
              }
              return f;
            },
            .jacobian = [n, h](const Vector& x) -> Matrix {
              Matrix jac = Matrix::Zero(n, n);
              for (Index i = 0; i < n; ++i) {
                jac(i, i) = 2.0 + rho * rho * h * h * std::cosh(rho * x[i]);
                if (i > 0) jac(i, i - 1) = -1.0;
                if (i + 1 < n) jac(i, i + 1) = -1.0;
              }
              return jac;
            },
            .pattern = SparsityPattern::banded(n, 1, 1),
            .set = FeasibleSet::uniform_box(n, -1.0, 1.0),
            .known_root = std::nullopt};
  return p;
}

/// Discrete integral equation function, evaluated with prefix/suffix sums.
inline Problem discrete_integral(Index n) {
  require_size("pb4_discrete_integral", n);
  const double h = 1.0 / static_cast<double>(n + 1);
  Problem p{.name = "pb4_discrete_integral",
            .n = n,
            .eval = [n, h](const Vector& x) -> Vector {
              Vector cube(n);
              for (Index j = 0; j < n; ++j) {
                const double w = x[j] + static_cast<double>(j + 1) * h + 1.0;
                cube[j] = w * w * w;
              }
              Vector f(n);
              // suffix[i] = sum_{j > i} (1 - t_j) w_j^3
              Vector suffix(n);
              double acc = 0.0;
              for (Index j = n - 1; j >= 0; --j) {
                suffix[j] = acc;
                acc += (1.0 - static_cast<double>(j + 1) * h) * cube[j];
              }
              double prefix = 0.0;
              for (Index i = 0; i < n; ++i) {
                const double ti = static_cast<double>(i + 1) * h;
                prefix += ti * cube[i];
                f[i] = x[i] + h * ((1.0 - ti) * prefix + ti * suffix[i]) / 2.0;
              }
              return f;
            },
            .jacobian = [n, h](const Vector& x) -> Matrix {
              Matrix jac = Matrix::Identity(n, n);
              for (Index j = 0; j < n; ++j) {
                const double tj = static_cast<double>(j + 1) * h;
                const double w = x[j] + tj + 1.0;
                const double dw = 3.0 * w * w;
                for (Index i = 0; i < n; ++i) {
                  const double ti = static_cast<double>(i + 1) * h;
                  const double kernel = j <= i ? (1.0 - ti) * tj : ti * (1.0 - tj);
                  jac(i, j) += h * kernel * dw / 2.0;
                }
              }
              return jac;
            },
            .pattern = SparsityPattern::dense(n),
            .set = FeasibleSet::uniform_box(n, -10.0, 10.0),
            .known_root = std::nullopt};
  return p;
}

/// x o x - 1 on [0, 2]^n; root at the all-ones vector.
inline Problem synthetic_quadratic(Index n) {
  require_size("synthetic_quadratic", n);
  Problem p{.name = "synthetic_quadratic",
            .n = n,
            .eval = [](const Vector& x) -> Vector { return (x.array().square() - 1.0).matrix(); },
            .jacobian = [](const Vector& x) -> Matrix { return (2.0 * x).asDiagonal(); },
            .pattern = SparsityPattern::diagonal(n),
            .set = FeasibleSet::uniform_box(n, 0.0, 2.0),
            .known_root = Vector::Ones(n)};
  return p;
}

/// A (x - xbar) with A = tridiag(-1, 4, -1) on [-1, 1]^n.
inline Problem synthetic_linear(Index n) {
  require_size("synthetic_linear", n);
  Vector xbar(n);
  for (Index i = 0; i < n; ++i) xbar[i] = 0.5 * std::cos(0.7 * static_cast<double>(i));
  Problem p{.name = "synthetic_linear",
            .n = n,
            .eval = [n, xbar](const Vector& x) -> Vector {
              const Vector d = x - xbar;
              Vector f(n);
              for (Index i = 0; i < n; ++i) {
                f[i] = 4.0 * d[i];
                if (i > 0) f[i] -= d[i - 1];
                if (i + 1 < n) f[i] -= d[i + 1];
              }
              return f;
            },
            .jacobian = [n](const Vector&) -> Matrix {
              Matrix a = Matrix::Zero(n, n);
              for (Index i = 0; i < n; ++i) {
                a(i, i) = 4.0;
                if (i > 0) a(i, i - 1) = -1.0;
                if (i + 1 < n) a(i, i + 1) = -1.0;
              }
              return a;
            },
            .pattern = SparsityPattern::banded(n, 1, 1),
            .set = FeasibleSet::uniform_box(n, -1.0, 1.0),
            .known_root = xbar};
  return p;
}

}  // namespace detail

/// All registered problems in listing order.
inline const std::vector<BenchEntry>& registry() {
  static const std::vector<BenchEntry> entries{
      {"pb1_h_equation", 400, 0.0, 5.0, true, "Chandrasekhar H-equation, c = 0.99", detail::h_equation},
      {"pb2_discrete_boundary", 500, -100.0, 100.0, true, "discrete boundary value function", detail::discrete_boundary},
      {"pb3_troesch", 500, -1.0, 1.0, true, "Troesch problem", detail::troesch},
      {"pb4_discrete_integral", 1000, -10.0, 10.0, true, "discrete integral equation", detail::discrete_integral},
      {"synthetic_quadratic", 10, 0.0, 2.0, false, "x o x - 1, root at ones", detail::synthetic_quadratic},
      {"synthetic_linear", 50, -1.0, 1.0, false, "tridiagonal linear system, interior root", detail::synthetic_linear},
  };
  return entries;
}

inline const BenchEntry& find_entry(std::string_view id) {
  for (const auto& e : registry())
    if (e.id == id) return e;
  throw std::invalid_argument("unknown problem id: " + std::string(id));
}

/// Builds a registered problem; n <= 0 selects the default dimension.
inline Problem make_problem(std::string_view id, Index n = 0) {
  const BenchEntry& e = find_entry(id);
  return e.builder(n > 0 ? n : e.default_n);
}

/// x0(gamma) = l + 0.25 gamma (u - l) for finite boxes, 10^gamma * ones
/// when some upper bound is infinite (clipped to the capped box).
inline Vector starting_point(const Problem& problem, int gamma, bool* clipped = nullptr) {
  if (gamma < 0 || gamma > 3) throw std::invalid_argument("starting_point: gamma must lie in {0, 1, 2, 3}");
  const FeasibleSet& set = problem.set;
  if (clipped) *clipped = false;
  if (!set.has_infinite_upper()) return set.lower() + 0.25 * gamma * (set.upper() - set.lower());
  Vector x = Vector::Constant(problem.n, std::pow(10.0, gamma));
  Vector projected = project_box(set, x);
  if (clipped) *clipped = projected != x;
  return projected;
}

}  // namespace inlcondg::bench
