#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "inlcondg/bench.hpp"
#include "inlcondg/solver.hpp"

namespace inlcondg::harness {

/// One line of a results table.
struct RunRow {
  std::string problem;
  Index n = 0;
  int gamma = 0;
  std::string method;
  int iters = 0;
  double final_norm_inf = 0.0;
  std::string status;
  double wall_ms = 0.0;
};

inline JacobianStrategy parse_method(std::string_view m) {
  if (m == "exact") return JacobianStrategy::exact;
  if (m == "fd") return JacobianStrategy::finite_difference;
  if (m == "schubert") return JacobianStrategy::schubert;
  throw std::invalid_argument("unknown method: " + std::string(m));
}

struct Case {
  std::string problem;
  Index n = 0;  // 0: registry default
  int gamma = 1;
  std::string method = "fd";
};

struct CaseResult {
  RunRow row;
  RunReport report;
};

inline CaseResult run_case(const Case& c, SolverConfig cfg) {
  const Problem problem = bench::make_problem(c.problem, c.n);
  cfg.jacobian_strategy = parse_method(c.method);
  const Vector x0 = bench::starting_point(problem, c.gamma);
  const auto start = std::chrono::steady_clock::now();
  CaseResult out;
  out.report = solve(problem, x0, cfg);
  const auto stop = std::chrono::steady_clock::now();
  out.row = RunRow{problem.name,
                   problem.n,
                   c.gamma,
                   c.method,
                   out.report.outer_iterations(),
                   out.report.final_residual(),
                   std::string(to_string(out.report.status)),
                   std::chrono::duration<double, std::milli>(stop - start).count()};
  return out;
}

inline std::string csv_header() { return "problem,n,gamma,method,iters,final_norm_inf,status,wall_ms"; }

inline std::string format_norm(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

inline std::string to_csv(const RunRow& r) {
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.3f", r.wall_ms);
  std::ostringstream os;
  os << r.problem << ',' << r.n << ',' << r.gamma << ',' << r.method << ',' << r.iters << ','
     << format_norm(r.final_norm_inf) << ',' << r.status << ',' << wall;
  return os.str();
}

inline std::string to_csv(const std::vector<RunRow>& rows) {
  std::string out = csv_header() + "\n";
  for (const auto& r : rows) out += to_csv(r) + "\n";
  return out;
}

inline nlohmann::json to_json(const RunRow& r) {
  return {{"problem", r.problem}, {"n", r.n},
          {"gamma", r.gamma},     {"method", r.method},
          {"iters", r.iters},     {"final_norm_inf", r.final_norm_inf},
          {"status", r.status},   {"wall_ms", r.wall_ms}};
}

/// Full iterate and residual history of a run.
inline nlohmann::json to_json(const RunReport& rep) {
  nlohmann::json iterates = nlohmann::json::array();
  for (const Vector& x : rep.iterates) iterates.push_back(std::vector<double>(x.data(), x.data() + x.size()));
  return {{"status", std::string(to_string(rep.status))},
          {"message", rep.message},
          {"start_projected", rep.start_projected},
          {"condg_cap_hits", rep.condg_cap_hits},
          {"residual_norms", rep.residual_norms},
          {"newton_steps", rep.newton_steps},
          {"condg_iters", rep.condg_iters},
          {"linear_residuals", rep.linear_residuals},
          {"iterates", iterates}};
}

/// Cross product of problems, gammas and methods in (problem, gamma, method)
/// lexicographic order.
inline std::vector<Case> make_suite(std::vector<std::string> problems, std::vector<int> gammas,
                                    std::vector<std::string> methods) {
  std::sort(problems.begin(), problems.end());
  std::sort(gammas.begin(), gammas.end());
  std::sort(methods.begin(), methods.end());
  std::vector<Case> cases;
  for (const auto& p : problems)
    for (int g : gammas)
      for (const auto& m : methods) cases.push_back(Case{p, 0, g, m});
  return cases;
}

inline std::vector<std::string> suite_problems(std::string_view suite) {
  std::vector<std::string> ids;
  if (suite != "paper-core" && suite != "all") throw std::invalid_argument("unknown suite: " + std::string(suite));
  for (const auto& e : bench::registry())
    if (suite == "all" || e.core_suite) ids.push_back(e.id);
  return ids;
}

/// Runs every case on up to `jobs` threads. Rows come back in case order;
/// a case that throws yields a row with status "error".
inline std::vector<RunRow> run_suite(const std::vector<Case>& cases, const SolverConfig& cfg, int jobs) {
  std::vector<RunRow> rows(cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      try {
        rows[i] = run_case(cases[i], cfg).row;
      } catch (const std::exception&) {
        rows[i] = RunRow{cases[i].problem, cases[i].n, cases[i].gamma, cases[i].method, 0, kInf, "error", 0.0};
      }
    }
  };
  const int nthreads = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(cases.size(), 1)));
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

}  // namespace inlcondg::harness
