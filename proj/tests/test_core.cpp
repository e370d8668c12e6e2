#include <gtest/gtest.h>

#include "inlcondg/bench.hpp"
#include "inlcondg/core.hpp"

using namespace inlcondg;

namespace {

SolverConfig with_theta(double theta) {
  SolverConfig cfg;
  cfg.theta = ThetaSchedule(theta);
  return cfg;
}

}  // namespace

TEST(ValidateConfig, ThetaOnBoundaryAccepted) {
  const TheoryParams tp{1.0, 0.0, 0.0, 0.1};
  EXPECT_NO_THROW(validate_config(with_theta(0.005), tp));
}

TEST(ValidateConfig, ZeroLambdaForcesZeroTheta) {
  const TheoryParams tp{1.0, 0.0, 0.0, 0.0};
  EXPECT_THROW(validate_config(with_theta(1e-5), tp), std::invalid_argument);
  EXPECT_EQ(config_violation(with_theta(1e-5), tp), "theta <= lambda^2/2");
  EXPECT_NO_THROW(validate_config(with_theta(0.0), tp));
}

TEST(ValidateConfig, AcceptsInteriorParameters) {
  // omega1*vartheta + omega2 = 0.5 and lambda < (1 - 0.5)/1.5 = 1/3
  const TheoryParams tp{1.0, 0.0, 0.5, 0.3};
  EXPECT_NEAR(tp.lambda_bound(), 1.0 / 3.0, 1e-15);
  EXPECT_NO_THROW(validate_config(with_theta(1e-5), tp));
}

TEST(ValidateConfig, NamesFirstViolation) {
  EXPECT_EQ(theory_params_violation({1.0, 1.5, 0.0, 0.0}), "omega2 < omega1");
  EXPECT_EQ(theory_params_violation({1.0, 0.0, 1.0, 0.0}), "0 <= vartheta < 1");
  EXPECT_EQ(theory_params_violation({2.0, 0.5, 0.3, 0.0}), "omega1*vartheta + omega2 < 1");
  EXPECT_EQ(theory_params_violation({1.0, 0.0, 0.5, 0.34}),
            "lambda < (1 - omega2 - omega1*vartheta)/(omega1*(1 + vartheta))");
  SolverConfig cfg;
  cfg.max_condg = 0;
  EXPECT_EQ(solver_config_violation(cfg), "max_condg >= 1");
  cfg = SolverConfig{};
  cfg.tol_inf = 0.0;
  EXPECT_EQ(solver_config_violation(cfg), "tol_inf > 0");
}

TEST(ValidateConfig, MonotoneInTheta) {
  const TheoryParams tp{1.2, 0.1, 0.2, 0.05};
  const double limit = tp.lambda * tp.lambda / 2.0;
  ASSERT_NO_THROW(validate_config(with_theta(limit), tp));
  for (int i = 0; i <= 100; ++i) EXPECT_NO_THROW(validate_config(with_theta(limit * i / 100.0), tp));
  EXPECT_THROW(validate_config(with_theta(limit * 1.0001), tp), std::invalid_argument);
}

TEST(ValidateConfig, ScheduleCheckedAgainstItsMaximum) {
  const TheoryParams tp{1.0, 0.0, 0.0, 0.1};
  SolverConfig cfg;
  cfg.theta = ThetaSchedule(std::vector<double>{0.001, 0.004, 0.006});
  EXPECT_THROW(validate_config(cfg, tp), std::invalid_argument);
  cfg.theta = ThetaSchedule(std::vector<double>{0.001, 0.004});
  EXPECT_NO_THROW(validate_config(cfg, tp));
  EXPECT_EQ(cfg.theta(0), 0.001);
  EXPECT_EQ(cfg.theta(7), 0.004);
}

TEST(SparsityPattern, MaskAndRespects) {
  const auto tri = SparsityPattern::banded(4, 1, 1);
  EXPECT_EQ(tri.nonzeros(), 10u);
  Matrix m = Matrix::Ones(4, 4);
  EXPECT_FALSE(tri.respects(m));
  tri.mask(m);
  EXPECT_TRUE(tri.respects(m));
  EXPECT_EQ(m(0, 2), 0.0);
  EXPECT_EQ(m(1, 2), 1.0);
  const auto detected = SparsityPattern::from_matrix(m, 0.5);
  EXPECT_EQ(detected.nonzeros(), 10u);
  EXPECT_TRUE(detected.contains(3, 2));
  EXPECT_FALSE(detected.contains(3, 1));
}

TEST(CheckProblem, AcceptsRegistryProblems) {
  for (const auto& e : bench::registry()) {
    const Problem p = e.builder(8);
    const std::vector<Vector> samples{bench::starting_point(p, 1), bench::starting_point(p, 2)};
    EXPECT_NO_THROW(check_problem(p, samples)) << e.id;
  }
}

TEST(CheckProblem, RejectsBrokenProblems) {
  Problem p = bench::make_problem("synthetic_quadratic", 4);
  const std::vector<Vector> samples{Vector::Constant(4, 0.5)};
  Problem bad_root = p;
  bad_root.known_root = Vector::Constant(4, 0.9);
  EXPECT_THROW(check_problem(bad_root, samples), std::invalid_argument);

  Problem bad_pattern = p;
  bad_pattern.jacobian = [](const Vector& x) -> Matrix { return Matrix::Constant(x.size(), x.size(), 1.0); };
  EXPECT_THROW(check_problem(bad_pattern, samples), std::invalid_argument);

  Problem bad_len = p;
  bad_len.eval = [](const Vector& x) -> Vector { return x.head(2); };
  EXPECT_THROW(check_problem(bad_len, samples), std::invalid_argument);
}
