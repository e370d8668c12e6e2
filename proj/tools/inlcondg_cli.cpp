// Command-line harness: single solves, benchmark tables and radius calculators.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "inlcondg/harness.hpp"
#include "inlcondg/theory.hpp"

namespace {

using namespace inlcondg;

constexpr int kExitOk = 0;
constexpr int kExitSolverFailure = 1;
constexpr int kExitUsage = 2;

struct SolverFlags {
  double tol = 1e-6;
  int max_iter = 300;
  double theta = 1e-5;
  int max_condg = 300;
  int refresh = 5;
  std::string linsolve = "direct";
  std::string eta_policy = "constant:0.1";
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--tol", f.tol, "stopping threshold on ||F||_inf")->capture_default_str();
  cmd->add_option("--max-iter", f.max_iter, "outer iteration cap")->capture_default_str();
  cmd->add_option("--theta", f.theta, "CondG error parameter")->capture_default_str();
  cmd->add_option("--max-condg", f.max_condg, "inner iteration cap")->capture_default_str();
  cmd->add_option("--refresh", f.refresh, "finite-difference refresh period for schubert")->capture_default_str();
  cmd->add_option("--linsolve", f.linsolve, "linear solver")
      ->check(CLI::IsMember({"direct", "inexact"}))
      ->capture_default_str();
  cmd->add_option("--eta-policy", f.eta_policy, "forcing terms: constant:ETA or adaptive:C,ETA_MAX")
      ->capture_default_str();
}

ForcingPolicy parse_eta_policy(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "constant") return ConstantForcing{args.empty() ? 0.1 : std::stod(args)};
  if (kind == "adaptive") {
    AdaptiveForcing a;
    if (!args.empty()) {
      const auto comma = args.find(',');
      a.c = std::stod(args.substr(0, comma));
      if (comma != std::string::npos) a.eta_max = std::stod(args.substr(comma + 1));
    }
    return a;
  }
  throw std::invalid_argument("unknown eta policy: " + spec);
}

SolverConfig make_config(const SolverFlags& f) {
  SolverConfig cfg;
  cfg.tol_inf = f.tol;
  cfg.max_outer = f.max_iter;
  cfg.theta = ThetaSchedule(f.theta);
  cfg.max_condg = f.max_condg;
  cfg.refresh_period = f.refresh;
  cfg.linsolve = f.linsolve == "inexact" ? LinSolveMode::inexact : LinSolveMode::direct;
  cfg.forcing = parse_eta_policy(f.eta_policy);
  if (auto v = solver_config_violation(cfg)) throw std::invalid_argument("invalid configuration: " + *v);
  return cfg;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inexact Newton-like conditional gradient solver for box-constrained nonlinear systems"};
  app.require_subcommand(1);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "solve one registered problem");
  std::string problem_id, method = "fd", out_path, format = "csv", trace_path;
  long n = 0;
  int gamma = 1;
  SolverFlags solve_flags;
  solve_cmd->add_option("--problem", problem_id, "problem id (see list-problems)")->required();
  solve_cmd->add_option("--n", n, "dimension (default: registry value)");
  solve_cmd->add_option("--gamma", gamma, "starting point index")->check(CLI::Range(0, 3))->capture_default_str();
  solve_cmd->add_option("--method", method, "Jacobian strategy")
      ->check(CLI::IsMember({"exact", "fd", "schubert"}))
      ->capture_default_str();
  solve_cmd->add_option("--out", out_path, "output file (default: stdout)");
  solve_cmd->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  solve_cmd->add_option("--trace", trace_path, "write the full iterate history as JSON");
  add_solver_flags(solve_cmd, solve_flags);

  // benchmark
  auto* bench_cmd = app.add_subcommand("benchmark", "run a problem x gamma x method suite");
  std::string suite = "paper-core", bench_out;
  std::vector<std::string> methods{"fd", "schubert"};
  std::vector<int> gammas{1, 2, 3};
  int jobs = 1;
  SolverFlags bench_flags;
  bench_cmd->add_option("--suite", suite, "problem suite")
      ->check(CLI::IsMember({"paper-core", "all"}))
      ->capture_default_str();
  bench_cmd->add_option("--methods", methods, "comma-separated methods")
      ->delimiter(',')
      ->check(CLI::IsMember({"exact", "fd", "schubert"}));
  bench_cmd->add_option("--gammas", gammas, "comma-separated starting point indices")
      ->delimiter(',')
      ->check(CLI::Range(0, 3));
  bench_cmd->add_option("--out", bench_out, "CSV output file (default: stdout)");
  bench_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  add_solver_flags(bench_cmd, bench_flags);

  // radius
  auto* radius_cmd = app.add_subcommand("radius", "convergence radii for the Holder or Smale class");
  std::string kind;
  double K = 1.0, p = 1.0, smale_gamma = 1.0, kappa = kInf;
  TheoryParams tp;
  radius_cmd->add_option("--kind", kind, "majorant class")->required()->check(CLI::IsMember({"holder", "smale"}));
  radius_cmd->add_option("--K", K, "Holder constant")->capture_default_str();
  radius_cmd->add_option("--p", p, "Holder exponent")->capture_default_str();
  radius_cmd->add_option("--gamma", smale_gamma, "Smale constant")->capture_default_str();
  radius_cmd->add_option("--omega1", tp.omega1)->capture_default_str();
  radius_cmd->add_option("--omega2", tp.omega2)->capture_default_str();
  radius_cmd->add_option("--vartheta", tp.vartheta)->capture_default_str();
  radius_cmd->add_option("--lambda", tp.lambda)->capture_default_str();
  radius_cmd->add_option("--kappa", kappa, "domain radius (default: inf)");

  auto* list_cmd = app.add_subcommand("list-problems", "list registered problems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    if (*list_cmd) {
      for (const auto& e : bench::registry()) {
        std::cout << std::left << std::setw(24) << e.id << " n=" << std::setw(6) << e.default_n << " box=[" << e.lower
                  << "," << e.upper << "]" << (e.core_suite ? "  paper-core  " : "  synthetic   ") << e.description
                  << "\n";
      }
      return kExitOk;
    }

    if (*radius_cmd) {
      if (auto v = theory_params_violation(tp)) {
        std::cerr << "invalid theory parameters: " << *v << "\n";
        return kExitUsage;
      }
      const RadiusBreakdown r = kind == "holder" ? holder_radius(K, p, tp, kappa) : smale_radius(smale_gamma, tp, kappa);
      std::cout << std::setprecision(12) << "nu = " << r.nu << "\nrho = " << r.rho << "\nsigma = " << r.sigma << "\n";
      return kExitOk;
    }

    if (*solve_cmd) {
      const SolverConfig cfg = make_config(solve_flags);
      bench::find_entry(problem_id);
      const auto result = harness::run_case(harness::Case{problem_id, static_cast<Index>(n), gamma, method}, cfg);
      if (format == "json") {
        write_output(out_path, harness::to_json(result.row).dump(2) + "\n");
      } else {
        write_output(out_path, harness::to_csv(std::vector<harness::RunRow>{result.row}));
      }
      if (!trace_path.empty()) {
        std::ofstream trace(trace_path);
        if (!trace) throw std::runtime_error("cannot open " + trace_path);
        trace << harness::to_json(result.report).dump() << "\n";
      }
      return result.report.status == RunStatus::converged ? kExitOk : kExitSolverFailure;
    }

    if (*bench_cmd) {
      const SolverConfig cfg = make_config(bench_flags);
      const auto cases = harness::make_suite(harness::suite_problems(suite), gammas, methods);
      const auto rows = harness::run_suite(cases, cfg, jobs);
      write_output(bench_out, harness::to_csv(rows));
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolverFailure;
  }
  return kExitUsage;
}
