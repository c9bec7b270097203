#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <stdexcept>

#include "fracspline/analysis.hpp"

using namespace fracspline;

namespace {

ReferenceFn example2_reference(const FractionalProblem& p) {
  auto a = std::make_shared<SystemMatrix>(p.a);
  return [p, a](double t) { return reference_solution(p, *a, t); };
}

}  // namespace

TEST_CASE("estimate_order examples") {
  CHECK(estimate_order(4e-3, 2e-3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(estimate_order(1e-2, 1e-2) == 0.0);
  const double e = 3.7e-5;
  CHECK(estimate_order(e, e * std::pow(2.0, -0.5)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(estimate_order(0.0, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(estimate_order(1e-3, -1e-3), std::invalid_argument);
}

TEST_CASE("order-estimator identity on synthetic errors") {
  for (double rho0 : {0.1, 0.25, 0.5, 1.0, 4.0}) {
    for (int j = 2; j <= 9; ++j) {
      const double c = 0.83;
      CHECK(estimate_order(c * std::pow(2.0, -j * rho0), c * std::pow(2.0, -(j + 1) * rho0)) ==
            doctest::Approx(rho0).epsilon(1e-12));
    }
  }
}

TEST_CASE("estimate_orders skips noise-floor pairs") {
  std::vector<ErrorReport> reports(3);
  reports[0].per_component_linf = {1e-2, 1e-14};
  reports[1].per_component_linf = {5e-3, 1e-14};
  reports[2].per_component_linf = {2.5e-3, 1e-6};
  const auto rho = estimate_orders(reports);
  REQUIRE(rho.size() == 2);
  CHECK(rho[0][0] == doctest::Approx(1.0));
  CHECK(std::isnan(rho[0][1]));
  CHECK(std::isnan(rho[1][1]));

  ConvergenceReport report;
  report.rho = rho;
  CHECK(report.min_rho() == doctest::Approx(1.0));
}

TEST_CASE("linf_error of a solution against itself is zero") {
  const FractionalProblem p = example2_problem(FractionalOrder(0.5));
  const SplineSolution sol = solve(p, CollocationConfig::with_default_s(3, 4));
  const ErrorReport report = linf_error(
      sol, [&](double t) { return sol(t); }, 7, 0.5);
  REQUIRE(report.per_component_linf.size() == 2);
  CHECK(report.per_component_linf[0] == 0.0);
  CHECK(report.per_component_linf[1] == 0.0);
  CHECK(report.sample_grid_level == 7);
  CHECK(report.level == 4);
  CHECK(report.colloc_level == 5);
}

TEST_CASE("parallel and serial error measurement agree exactly") {
  const FractionalProblem p = example2_problem(FractionalOrder(0.25));
  const SplineSolution sol = solve(p, CollocationConfig::with_default_s(4, 5));
  const ReferenceFn ref = example2_reference(p);
  const ErrorReport par = linf_error(sol, ref, 8, 0.25);
  const ErrorReport ser = linf_error_serial(sol, ref, 8, 0.25);
  CHECK(par.per_component_linf == ser.per_component_linf);
}

TEST_CASE("Example 1 gamma sweep sits at the noise floor") {
  for (double g : {0.1, 0.25, 0.5, 0.75}) {
    const ErrorReport r = run_example1(g, 3, 7);
    CAPTURE(g);
    CHECK(r.max() <= 1e-12);
    CHECK(r.sample_grid_level == 10);
  }
  CHECK(run_example1(0.5, 4, 7).max() <= 1e-12);
}

TEST_CASE("Example 2 errors decrease with the level") {
  for (double g : {0.1, 0.25, 0.5, 0.75}) {
    const ConvergenceReport r = run_example2(g, 3, {4, 5, 6, 7});
    REQUIRE(r.errors.size() == 4);
    REQUIRE(r.rho.size() == 3);
    for (std::size_t k = 0; k + 1 < r.errors.size(); ++k) {
      for (std::size_t i = 0; i < 2; ++i) {
        CAPTURE(g);
        CAPTURE(k);
        CHECK(r.errors[k + 1].per_component_linf[i] < r.errors[k].per_component_linf[i]);
      }
    }
    CHECK(r.min_rho() >= g - 0.2);
  }
}

TEST_CASE("Example 2 examples") {
  const ConvergenceReport half = run_example2(0.5, 3, {4, 5, 6, 7});
  CHECK(half.min_rho() >= 0.3);

  const ConvergenceReport classical = run_example2(1.0, 3, {2, 3, 4});
  for (const auto& pair : classical.rho) {
    for (double rho : pair) CHECK(std::abs(rho - 4.0) <= 0.7);
  }

  const ConvergenceReport cubic = run_example2(0.25, 3, {4, 5, 6, 7});
  const ConvergenceReport quartic = run_example2(0.25, 4, {4, 5, 6, 7});
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(quartic.errors[k].per_component_linf[i] < cubic.errors[k].per_component_linf[i]);
    }
  }
}

TEST_CASE("error grid independence") {
  const FractionalProblem p = example2_problem(FractionalOrder(0.5));
  const ReferenceFn ref = example2_reference(p);
  for (int j : {4, 6}) {
    const CollocationConfig c = CollocationConfig::with_default_s(3, j);
    const SplineSolution sol = solve(p, c);
    const ErrorReport coarse = linf_error(sol, ref, c.colloc_level + 2, 0.5);
    const ErrorReport fine = linf_error(sol, ref, c.colloc_level + 3, 0.5);
    for (std::size_t i = 0; i < 2; ++i) {
      const double change = std::abs(fine.per_component_linf[i] - coarse.per_component_linf[i]) /
                            fine.per_component_linf[i];
      CAPTURE(j);
      CHECK(change < 0.05);
    }
  }
}

TEST_CASE("convergence_sweep honours its options") {
  const FractionalProblem p = example2_problem(FractionalOrder(0.75));
  SweepOptions options;
  options.grid_level = 9;
  const ConvergenceReport r = convergence_sweep(p, example2_reference(p), 3, {3, 4}, options);
  CHECK(r.levels == std::vector<int>{3, 4});
  CHECK(r.errors[0].sample_grid_level == 9);
  CHECK(r.errors[1].colloc_level == 5);
  CHECK(r.gamma == 0.75);

  options.colloc_offset = 2;
  options.grid_level.reset();
  const ConvergenceReport shifted = convergence_sweep(p, example2_reference(p), 3, {3}, options);
  CHECK(shifted.errors[0].colloc_level == 5);
  CHECK(shifted.errors[0].sample_grid_level == 7);

  CHECK_THROWS_AS(convergence_sweep(p, example2_reference(p), 3, {}, {}), std::invalid_argument);
}

TEST_CASE("stability_check examples") {
  CHECK(stability_check(SystemMatrix(example2_problem(FractionalOrder(0.5)).a)));
  CHECK_FALSE(stability_check(SystemMatrix(Eigen::MatrixXd::Identity(2, 2))));
  CHECK_FALSE(stability_check(SystemMatrix(Eigen::MatrixXd::Zero(2, 2))));
  Eigen::MatrixXd damped_rotation(2, 2);
  damped_rotation << -0.1, -1.0, 1.0, -0.1;
  CHECK(stability_check(SystemMatrix(damped_rotation)));
}
