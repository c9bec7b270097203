#include "fracspline/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fracspline/parallel.hpp"

namespace fracspline {

double ErrorReport::max() const {
  double best = 0.0;
  for (double e : per_component_linf) best = std::max(best, e);
  return best;
}

double ConvergenceReport::min_rho() const {
  double best = std::numeric_limits<double>::quiet_NaN();
  for (const auto& pair : rho) {
    for (double r : pair) {
      if (std::isnan(r)) continue;
      if (std::isnan(best) || r < best) best = r;
    }
  }
  return best;
}

namespace {

ErrorReport make_report(const SplineSolution& sol, int grid_level, double gamma) {
  ErrorReport report;
  report.gamma = gamma;
  report.degree = sol.config().degree;
  report.level = sol.config().level;
  report.colloc_level = sol.config().colloc_level;
  report.sample_grid_level = grid_level;
  report.per_component_linf.assign(static_cast<std::size_t>(sol.dim()), 0.0);
  return report;
}

int sample_count(const SplineSolution& sol, int grid_level) {
  if (grid_level < 0 || grid_level > 24) {
    throw std::invalid_argument("linf_error: grid level must lie in [0, 24]");
  }
  return (1 << grid_level) * sol.config().horizon;
}

}  // namespace

ErrorReport linf_error(const SplineSolution& sol, const ReferenceFn& reference, int grid_level,
                       double gamma) {
  ErrorReport report = make_report(sol, grid_level, gamma);
  const int count = sample_count(sol, grid_level);
  Eigen::MatrixXd diffs(sol.dim(), count + 1);

  detail::FirstError error;
#pragma omp parallel for schedule(static)
  for (int p = 0; p <= count; ++p) {
    try {
      const double t = std::ldexp(static_cast<double>(p), -grid_level);
      diffs.col(p) = (reference(t) - sol(t)).cwiseAbs();
    } catch (...) {
      error.capture();
    }
  }
  error.rethrow();
  for (int i = 0; i < sol.dim(); ++i) report.per_component_linf[i] = diffs.row(i).maxCoeff();
  return report;
}

ErrorReport linf_error_serial(const SplineSolution& sol, const ReferenceFn& reference,
                              int grid_level, double gamma) {
  ErrorReport report = make_report(sol, grid_level, gamma);
  const int count = sample_count(sol, grid_level);
  for (int p = 0; p <= count; ++p) {
    const double t = std::ldexp(static_cast<double>(p), -grid_level);
    const Eigen::VectorXd diff = reference(t) - sol(t);
    for (int i = 0; i < sol.dim(); ++i) {
      report.per_component_linf[i] = std::max(report.per_component_linf[i], std::abs(diff[i]));
    }
  }
  return report;
}

double estimate_order(double e_j, double e_j1) {
  if (!(e_j > 0.0) || !(e_j1 > 0.0)) {
    throw std::invalid_argument("estimate_order: errors must be positive");
  }
  return std::log(e_j / e_j1) / std::log(2.0);
}

FractionalProblem example1_problem(FractionalOrder gamma) {
  FractionalProblem problem;
  problem.a = Eigen::MatrixXd::Constant(1, 1, -1.0);
  problem.x0 = Eigen::VectorXd::Zero(1);
  problem.gamma = gamma;
  problem.horizon = 1;
  problem.forcing = {{{ForcingTerm::Kind::poly, 2.0, 1.0},
                      {ForcingTerm::Kind::caputo_power, 2.0, 1.0}}};
  return problem;
}

FractionalProblem example2_problem(FractionalOrder gamma) {
  FractionalProblem problem;
  problem.a.resize(2, 2);
  problem.a << -1.5, 0.5, 0.5, -1.5;
  problem.x0.resize(2);
  problem.x0 << 1.0, 2.0;
  problem.gamma = gamma;
  problem.horizon = 1;
  return problem;
}

ErrorReport run_example1(double gamma, int degree, int level) {
  const FractionalProblem problem = example1_problem(FractionalOrder(gamma));
  const auto config = CollocationConfig::with_default_s(degree, level, problem.horizon);
  const SplineSolution sol = solve(problem, config);
  const ReferenceFn exact = [](double t) { return Eigen::VectorXd::Constant(1, t * t); };
  return linf_error(sol, exact, config.colloc_level + 2, gamma);
}

std::vector<std::vector<double>> estimate_orders(const std::vector<ErrorReport>& errors) {
  std::vector<std::vector<double>> rho;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    const auto& a = errors[k].per_component_linf;
    const auto& b = errors[k + 1].per_component_linf;
    std::vector<double> pair(a.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] >= kNoiseFloor && b[i] >= kNoiseFloor) pair[i] = estimate_order(a[i], b[i]);
    }
    rho.push_back(std::move(pair));
  }
  return rho;
}

ConvergenceReport convergence_sweep(const FractionalProblem& problem, const ReferenceFn& reference,
                                    int degree, const std::vector<int>& levels,
                                    const SweepOptions& options) {
  if (levels.empty()) throw std::invalid_argument("convergence_sweep: no levels given");
  ConvergenceReport report;
  report.gamma = problem.gamma.value();
  report.degree = degree;
  report.levels = levels;
  report.errors.resize(levels.size());

  const int count = static_cast<int>(levels.size());
  // Inner assembly loops run single-threaded inside this region unless
  // nested parallelism is enabled.
  detail::FirstError error;
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = count - 1; k >= 0; --k) {
    try {
      const CollocationConfig config{degree, levels[k], levels[k] + options.colloc_offset,
                                     problem.horizon, options.ic_weight};
      const SplineSolution sol = solve(problem, config);
      const int grid = options.grid_level.value_or(config.colloc_level + options.grid_offset);
      report.errors[k] = linf_error_serial(sol, reference, grid, report.gamma);
    } catch (...) {
      error.capture();
    }
  }
  error.rethrow();
  report.rho = estimate_orders(report.errors);
  return report;
}

ConvergenceReport run_example2(double gamma, int degree, const std::vector<int>& levels) {
  const FractionalProblem problem = example2_problem(FractionalOrder(gamma));
  const SystemMatrix a(problem.a);
  const ReferenceFn exact = [&](double t) { return reference_solution(problem, a, t); };
  return convergence_sweep(problem, exact, degree, levels);
}

bool stability_check(const SystemMatrix& a) {
  return (a.spectrum().real().array() < 0.0).all();
}

}  // namespace fracspline
