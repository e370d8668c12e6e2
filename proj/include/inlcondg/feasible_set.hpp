#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

#include <Eigen/Dense>

namespace inlcondg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Box l <= x <= u. Entries of u may be +inf; the linear oracle and
/// membership tests work on the capped box u_i -> min(u_i, cap).
struct Box {
  Vector lower;
  Vector upper;
};

struct EuclideanBall {
  Vector center;
  double radius = 1.0;
};

/// {x >= 0, sum(x) = scale}.
struct Simplex {
  Index dim = 0;
  double scale = 1.0;
};

/// Convex compact set exposing a linear-minimization oracle.
class FeasibleSet {
 public:
  using Kind = std::variant<Box, EuclideanBall, Simplex>;

  static constexpr double kDefaultCap = 1e6;

  static FeasibleSet box(Vector lower, Vector upper, double effective_cap = kDefaultCap) {
    return FeasibleSet(Box{std::move(lower), std::move(upper)}, effective_cap);
  }
  static FeasibleSet uniform_box(Index n, double lower, double upper,
                                 double effective_cap = kDefaultCap) {
    return box(Vector::Constant(n, lower), Vector::Constant(n, upper), effective_cap);
  }
  static FeasibleSet ball(Vector center, double radius) {
    return FeasibleSet(EuclideanBall{std::move(center), radius}, kDefaultCap);
  }
  static FeasibleSet simplex(Index dim, double scale) {
    return FeasibleSet(Simplex{dim, scale}, kDefaultCap);
  }

  const Kind& kind() const { return kind_; }
  bool is_box() const { return std::holds_alternative<Box>(kind_); }
  double effective_cap() const { return effective_cap_; }

  Index dim() const {
    return std::visit(
        [](const auto& s) -> Index {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Box>) return s.lower.size();
          else if constexpr (std::is_same_v<T, EuclideanBall>) return s.center.size();
          else return s.dim;
        },
        kind_);
  }

  /// Lower bounds of a box. Throws for other kinds.
  const Vector& lower() const { return as_box().lower; }
  /// Upper bounds of a box as given (may contain +inf).
  const Vector& upper() const { return as_box().upper; }
  /// Upper bounds of a box after substituting the cap for +inf.
  const Vector& capped_upper() const {
    as_box();
    return capped_upper_;
  }
  bool has_infinite_upper() const {
    const Vector& u = upper();
    for (Index i = 0; i < u.size(); ++i)
      if (std::isinf(u[i])) return true;
    return false;
  }

  /// Returns a minimizer of <d, u> over the set. Box ties (d_i == 0) go to
  /// the lower bound; a zero direction on a ball returns the center.
  Vector lmo(const Vector& d) const {
    if (d.size() != dim()) throw std::invalid_argument("lmo: dimension mismatch");
    if (!d.allFinite()) throw std::invalid_argument("lmo: non-finite direction");
    return std::visit(
        [&](const auto& s) -> Vector {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Box>) {
            Vector u(d.size());
            for (Index i = 0; i < d.size(); ++i)
              u[i] = d[i] < 0.0 ? capped_upper_[i] : s.lower[i];
            return u;
          } else if constexpr (std::is_same_v<T, EuclideanBall>) {
            const double nd = d.norm();
            if (nd == 0.0) return s.center;
            return s.center - (s.radius / nd) * d;
          } else {
            Index best = 0;
            d.minCoeff(&best);
            Vector u = Vector::Zero(s.dim);
            u[best] = s.scale;
            return u;
          }
        },
        kind_);
  }

  /// Clamps rounding excursions of a convex combination back into a box.
  /// No-op for the other kinds.
  void snap(Vector& x) const {
    if (const auto* b = std::get_if<Box>(&kind_)) x = x.cwiseMax(b->lower).cwiseMin(capped_upper_);
  }

  /// Membership with every constraint relaxed by tol.
  bool contains(const Vector& x, double tol = 0.0) const {
    if (x.size() != dim()) return false;
    if (!x.allFinite()) return false;
    return std::visit(
        [&](const auto& s) -> bool {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Box>) {
            for (Index i = 0; i < x.size(); ++i)
              if (x[i] < s.lower[i] - tol || x[i] > capped_upper_[i] + tol) return false;
            return true;
          } else if constexpr (std::is_same_v<T, EuclideanBall>) {
            return (x - s.center).norm() <= s.radius + tol;
          } else {
            if (x.minCoeff() < -tol) return false;
            return std::abs(x.sum() - s.scale) <= tol;
          }
        },
        kind_);
  }

 private:
  FeasibleSet(Kind kind, double effective_cap) : kind_(std::move(kind)), effective_cap_(effective_cap) {
    if (!(effective_cap_ > 0.0) || !std::isfinite(effective_cap_))
      throw std::invalid_argument("FeasibleSet: effective_cap must be positive and finite");
    std::visit([this](const auto& s) { init(s); }, kind_);
  }

  void init(const Box& b) {
    if (b.lower.size() != b.upper.size() || b.lower.size() == 0)
      throw std::invalid_argument("box: bound vectors must be non-empty and of equal length");
    capped_upper_ = b.upper.cwiseMin(effective_cap_);
    for (Index i = 0; i < b.lower.size(); ++i) {
      if (!std::isfinite(b.lower[i]) || std::isnan(b.upper[i]))
        throw std::invalid_argument("box: lower bounds must be finite");
      if (!(b.lower[i] < capped_upper_[i]))
        throw std::invalid_argument("box: l_i < min(u_i, cap) violated at index " + std::to_string(i));
    }
  }
  void init(const EuclideanBall& b) {
    if (b.center.size() == 0 || !b.center.allFinite())
      throw std::invalid_argument("ball: center must be non-empty and finite");
    if (!(b.radius > 0.0) || !std::isfinite(b.radius))
      throw std::invalid_argument("ball: radius must be positive");
  }
  void init(const Simplex& s) {
    if (s.dim <= 0) throw std::invalid_argument("simplex: dimension must be positive");
    if (!(s.scale > 0.0) || !std::isfinite(s.scale))
      throw std::invalid_argument("simplex: scale must be positive");
  }

  const Box& as_box() const {
    if (const auto* b = std::get_if<Box>(&kind_)) return *b;
    throw std::invalid_argument("feasible set is not a box");
  }

  Kind kind_;
  double effective_cap_;
  Vector capped_upper_;
};

/// Coordinatewise clip of y onto [l, u].
inline Vector project_box(const Vector& lower, const Vector& upper, const Vector& y) {
  if (lower.size() != y.size() || upper.size() != y.size())
    throw std::invalid_argument("project_box: dimension mismatch");
  return y.cwiseMax(lower).cwiseMin(upper);
}

/// Exact Euclidean projection onto a (capped) box set.
inline Vector project_box(const FeasibleSet& set, const Vector& y) {
  return project_box(set.lower(), set.capped_upper(), y);
}

}  // namespace inlcondg
