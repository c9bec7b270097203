#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "fracspline/bspline.hpp"
#include "fracspline/fractional.hpp"
#include "fracspline/problem.hpp"

namespace fracspline {

/// Discretisation: spline degree n, approximation level j, collocation level s
/// and horizon T. The least-squares system has 2^s T + 1 equations per
/// component against 2^j T + n unknowns, so 2^s T + 1 >= 2^j T + n is required.
struct CollocationConfig {
  int degree = 3;
  int level = 4;
  int colloc_level = 5;
  int horizon = 1;
  double ic_weight = 1.0;  // weight of the X(0) = X0 rows

  static CollocationConfig with_default_s(int degree, int level, int horizon = 1);

  bool solvable() const;
  void validate() const;  // throws std::invalid_argument

  int rows() const { return (1 << colloc_level) * horizon; }  // derivative rows per component
  int cols() const { return (1 << level) * horizon + degree; }

  bool operator==(const CollocationConfig&) const = default;
};

/// Dyadic nodes p / 2^s, p = 0 .. 2^s T.
std::vector<double> collocation_grid(int colloc_level, int horizon);

struct CollocationMatrices {
  Eigen::MatrixXd g;       // D^gamma phi_{j,ell}(t_p), p = 1 .. 2^s T
  Eigen::MatrixXd b;       // phi_{j,ell}(t_p)
  Eigen::RowVectorXd phi0; // phi_{j,ell}(0)
};

/// Row-parallel assembly (OpenMP) over precomputed per-order tables; rows
/// only touch the support of each basis function.
CollocationMatrices assemble(const CollocationConfig& config, FractionalOrder gamma);

/// Reference assembly: one free-function call per entry, single thread.
CollocationMatrices assemble_serial(const CollocationConfig& config, FractionalOrder gamma);

struct StackedSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
};

/// Component-major system: block (i, k) of the derivative rows is
/// delta_ik G - A_ik B, followed by the m initial-condition rows I_m (x) phi0.
/// The Kronecker products are never formed.
StackedSystem stack_system(const FractionalProblem& problem, const CollocationConfig& config,
                           const CollocationMatrices& mats);

class SplineSolution {
 public:
  SplineSolution(CollocationConfig config, Eigen::MatrixXd coeffs, double residual_norm);

  const CollocationConfig& config() const { return config_; }
  // Row i: coefficients of component i, columns ordered ell = -n .. 2^j T - 1.
  const Eigen::MatrixXd& coeffs() const { return coeffs_; }
  double residual_norm() const { return residual_norm_; }
  int dim() const { return static_cast<int>(coeffs_.rows()); }

  /// Translates [first, last] whose support contains t; at most n + 1.
  std::pair<int, int> active_range(double t) const;

  Eigen::VectorXd operator()(double t) const;

 private:
  CollocationConfig config_;
  Eigen::MatrixXd coeffs_;
  double residual_norm_;
};

/// Least-squares collocation solve by column-pivoted Householder QR.
/// Throws std::invalid_argument for inconsistent input and NumericalError
/// when the stacked matrix is rank deficient at relative tolerance 1e-12.
SplineSolution solve(const FractionalProblem& problem, const CollocationConfig& config);

Eigen::VectorXd evaluate_solution(const SplineSolution& sol, double t);

/// D^gamma X_j(t) - A X_j(t) - F(t).
Eigen::VectorXd collocation_residual(const SplineSolution& sol, const FractionalProblem& problem,
                                     double t);

}  // namespace fracspline
