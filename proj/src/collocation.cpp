#include "fracspline/collocation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fracspline/errors.hpp"
#include "fracspline/parallel.hpp"

namespace fracspline {

CollocationConfig CollocationConfig::with_default_s(int degree, int level, int horizon) {
  return CollocationConfig{degree, level, level + 1, horizon, 1.0};
}

bool CollocationConfig::solvable() const {
  return (1LL << colloc_level) * horizon + 1 >= (1LL << level) * horizon + degree;
}

void CollocationConfig::validate() const {
  if (degree < 1) throw std::invalid_argument("config: spline degree n must be >= 1");
  if (level < 0 || colloc_level < 0) {
    throw std::invalid_argument("config: levels j and s must be non-negative");
  }
  if (level > 20 || colloc_level > 20) throw std::invalid_argument("config: level too large");
  if (horizon < 1) throw std::invalid_argument("config: horizon T must be >= 1");
  if (!(ic_weight > 0.0)) throw std::invalid_argument("config: ic_weight must be positive");
  if (!solvable()) {
    throw std::invalid_argument(
        "config: solvability condition 2^s*T + 1 >= 2^j*T + n violated (n=" +
        std::to_string(degree) + ", j=" + std::to_string(level) + ", s=" +
        std::to_string(colloc_level) + ", T=" + std::to_string(horizon) + ")");
  }
}

std::vector<double> collocation_grid(int colloc_level, int horizon) {
  if (colloc_level < 0 || horizon < 1) {
    throw std::invalid_argument("collocation_grid: need s >= 0 and T >= 1");
  }
  const int count = (1 << colloc_level) * horizon;
  std::vector<double> grid(static_cast<std::size_t>(count + 1));
  for (int p = 0; p <= count; ++p) grid[p] = std::ldexp(static_cast<double>(p), -colloc_level);
  return grid;
}

namespace {

CollocationMatrices allocate(const CollocationConfig& config) {
  CollocationMatrices mats;
  mats.g = Eigen::MatrixXd::Zero(config.rows(), config.cols());
  mats.b = Eigen::MatrixXd::Zero(config.rows(), config.cols());
  mats.phi0 = Eigen::RowVectorXd::Zero(config.cols());
  for (int c = 0; c < config.degree; ++c) {
    mats.phi0[c] = basis_eval({config.degree, config.level, c - config.degree}, 0.0);
  }
  return mats;
}

}  // namespace

CollocationMatrices assemble(const CollocationConfig& config, FractionalOrder gamma) {
  config.validate();
  CollocationMatrices mats = allocate(config);
  const CaputoBasis caputo(config.degree, gamma);
  const std::vector<double> grid = collocation_grid(config.colloc_level, config.horizon);
  const int n = config.degree;
  const int rows = config.rows();
  const int cols = config.cols();
  const double scale = std::ldexp(1.0, config.level);
  const double root = std::sqrt(scale);
  const double factor = gamma.is_classical() ? root * scale : root * std::pow(scale, gamma.value());

  detail::FirstError error;
#pragma omp parallel for schedule(dynamic, 16)
  for (int p = 0; p < rows; ++p) {
    try {
      const double x = scale * grid[static_cast<std::size_t>(p + 1)];
      for (int c = 0; c < cols; ++c) {
        const int ell = c - n;
        const double local = x - ell;
        if (local <= 0.0) break;  // translates only grow from here
        if (local < n + 1) mats.b(p, c) = root * bspline_eval(n, local);
        if (gamma.is_classical() && local >= n + 1) continue;
        mats.g(p, c) = factor * caputo.unscaled(ell, x);
      }
    } catch (...) {
      error.capture();
    }
  }
  error.rethrow();
  return mats;
}

CollocationMatrices assemble_serial(const CollocationConfig& config, FractionalOrder gamma) {
  config.validate();
  CollocationMatrices mats = allocate(config);
  const std::vector<double> grid = collocation_grid(config.colloc_level, config.horizon);
  for (int p = 0; p < config.rows(); ++p) {
    const double t = grid[static_cast<std::size_t>(p + 1)];
    for (int c = 0; c < config.cols(); ++c) {
      const BasisIndex idx{config.degree, config.level, c - config.degree};
      mats.b(p, c) = basis_eval(idx, t);
      mats.g(p, c) = caputo_basis(idx, gamma, t);
    }
  }
  return mats;
}

StackedSystem stack_system(const FractionalProblem& problem, const CollocationConfig& config,
                           const CollocationMatrices& mats) {
  const Eigen::Index m = problem.dim();
  const Eigen::Index rows = mats.g.rows();
  const Eigen::Index cols = mats.g.cols();
  StackedSystem sys;
  sys.matrix = Eigen::MatrixXd::Zero(m * rows + m, m * cols);
  sys.rhs = Eigen::VectorXd::Zero(m * rows + m);

  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index k = 0; k < m; ++k) {
      auto block = sys.matrix.block(i * rows, k * cols, rows, cols);
      const double a_ik = problem.a(i, k);
      if (i == k) {
        block = mats.g - a_ik * mats.b;
      } else if (a_ik != 0.0) {
        block = -a_ik * mats.b;
      }
    }
    sys.matrix.block(m * rows + i, i * cols, 1, cols) = config.ic_weight * mats.phi0;
    sys.rhs[m * rows + i] = config.ic_weight * problem.x0[i];
  }

  if (!problem.homogeneous()) {
    const std::vector<double> grid = collocation_grid(config.colloc_level, config.horizon);
    for (Eigen::Index p = 0; p < rows; ++p) {
      const Eigen::VectorXd f = problem.forcing_at(grid[static_cast<std::size_t>(p + 1)]);
      for (Eigen::Index i = 0; i < m; ++i) sys.rhs[i * rows + p] = f[i];
    }
  }
  return sys;
}

// ---------------------------------------------------------------------------
// SplineSolution

SplineSolution::SplineSolution(CollocationConfig config, Eigen::MatrixXd coeffs,
                               double residual_norm)
    : config_(config), coeffs_(std::move(coeffs)), residual_norm_(residual_norm) {
  if (coeffs_.cols() != config_.cols()) {
    throw std::invalid_argument("SplineSolution: coefficient count does not match the basis");
  }
}

std::pair<int, int> SplineSolution::active_range(double t) const {
  const double x = std::ldexp(t, config_.level);
  const int n = config_.degree;
  const int last = (1 << config_.level) * config_.horizon - 1;
  const int lo = std::max(-n, static_cast<int>(std::floor(x)) - n);
  const int hi = std::min(last, static_cast<int>(std::ceil(x)) - 1);
  return {lo, hi};
}

Eigen::VectorXd SplineSolution::operator()(double t) const {
  if (!(t >= 0.0 && t <= config_.horizon)) {
    throw std::invalid_argument("evaluate_solution: t = " + std::to_string(t) +
                                " outside [0, T]");
  }
  Eigen::VectorXd value = Eigen::VectorXd::Zero(coeffs_.rows());
  const auto [lo, hi] = active_range(t);
  for (int ell = lo; ell <= hi; ++ell) {
    const double phi = basis_eval({config_.degree, config_.level, ell}, t);
    value += coeffs_.col(ell + config_.degree) * phi;
  }
  return value;
}

SplineSolution solve(const FractionalProblem& problem, const CollocationConfig& config) {
  problem.validate();
  config.validate();
  if (config.horizon != problem.horizon) {
    throw std::invalid_argument("solve: config horizon does not match the problem horizon");
  }
  const CollocationMatrices mats = assemble(config, problem.gamma);
  const StackedSystem sys = stack_system(problem, config, mats);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sys.matrix);
  qr.setThreshold(1e-12);
  if (qr.rank() < sys.matrix.cols()) {
    throw NumericalError("solve: collocation matrix is rank deficient (rank " +
                         std::to_string(qr.rank()) + " of " +
                         std::to_string(sys.matrix.cols()) + ")");
  }
  const Eigen::VectorXd x = qr.solve(sys.rhs);
  const double residual = (sys.matrix * x - sys.rhs).norm();

  const Eigen::Index m = problem.dim();
  const Eigen::Index cols = config.cols();
  Eigen::MatrixXd coeffs(m, cols);
  for (Eigen::Index i = 0; i < m; ++i) coeffs.row(i) = x.segment(i * cols, cols).transpose();
  return SplineSolution(config, std::move(coeffs), residual);
}

Eigen::VectorXd evaluate_solution(const SplineSolution& sol, double t) { return sol(t); }

Eigen::VectorXd collocation_residual(const SplineSolution& sol, const FractionalProblem& problem,
                                     double t) {
  const CollocationConfig& config = sol.config();
  if (!(t > 0.0 && t <= config.horizon)) {
    throw std::invalid_argument("collocation_residual: t must lie in (0, T]");
  }
  const CaputoBasis caputo(config.degree, problem.gamma);
  Eigen::VectorXd derivative = Eigen::VectorXd::Zero(sol.dim());
  for (int c = 0; c < config.cols(); ++c) {
    derivative += sol.coeffs().col(c) * caputo(config.level, c - config.degree, t);
  }
  return derivative - problem.a * sol(t) - problem.forcing_at(t);
}

}  // namespace fracspline
