#pragma once

#include <algorithm>
#include <stdexcept>

#include "inlcondg/feasible_set.hpp"

namespace inlcondg {

enum class CondGStop { gap, iteration_cap };

struct CondGResult {
  Vector z;
  int inner_iters = 0;  // oracle calls, i.e. the final value of t
  double final_gap = 0.0;  // g*_t at the returned z
  CondGStop terminated_by = CondGStop::gap;
};

/// min over u in set of <z - y, u - z>. Never positive.
inline double wolfe_gap(const FeasibleSet& set, const Vector& y, const Vector& z) {
  const Vector d = z - y;
  return d.dot(set.lmo(d) - z);
}

/// Conditional-gradient approximate projection of y onto the set, started
/// at the feasible point x. Stops once the Wolfe gap is >= -eps, or after
/// `cap` oracle calls; in the latter case z is the last iterate whose gap
/// was measured.
inline CondGResult condg(const FeasibleSet& set, const Vector& y, const Vector& x, double eps, int cap) {
  if (y.size() != set.dim() || x.size() != set.dim()) throw std::invalid_argument("condg: dimension mismatch");
  if (!(eps >= 0.0)) throw std::invalid_argument("condg: eps must be non-negative");
  if (cap < 1) throw std::invalid_argument("condg: cap must be >= 1");
  if (!set.contains(x, 1e-12)) throw std::invalid_argument("condg: starting point is infeasible");

  CondGResult res;
  res.z = x;
  Vector d(x.size());
  Vector dir(x.size());
  for (int t = 1;; ++t) {
    d = res.z - y;
    dir = set.lmo(d) - res.z;
    const double gap = d.dot(dir);
    res.inner_iters = t;
    res.final_gap = gap;
    if (gap >= -eps) {
      res.terminated_by = CondGStop::gap;
      return res;
    }
    if (t == cap) {
      res.terminated_by = CondGStop::iteration_cap;
      return res;
    }
    const double dd = dir.squaredNorm();
    // only reachable through rounding: a negative gap needs u_t != z_t
    if (dd == 0.0) {
      res.terminated_by = CondGStop::gap;
      return res;
    }
    const double alpha = std::min(1.0, -gap / dd);
    res.z += alpha * dir;
    set.snap(res.z);
  }
}

}  // namespace inlcondg
