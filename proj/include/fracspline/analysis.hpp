#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <vector>

#include "fracspline/collocation.hpp"
#include "fracspline/mittag_leffler.hpp"

namespace fracspline {

using ReferenceFn = std::function<Eigen::VectorXd(double)>;

struct ErrorReport {
  double gamma = 0.0;
  int degree = 0;
  int level = 0;
  int colloc_level = 0;
  int sample_grid_level = 0;
  std::vector<double> per_component_linf;

  double max() const;
};

struct ConvergenceReport {
  double gamma = 0.0;
  int degree = 0;
  std::vector<int> levels;
  std::vector<ErrorReport> errors;
  // rho[k][i]: order between levels[k] and levels[k+1] for component i;
  // NaN where either error sits below the noise floor.
  std::vector<std::vector<double>> rho;

  /// Smallest finite rho over all pairs and components (NaN if none).
  double min_rho() const;
};

// Errors below this are treated as numerical noise by the order estimator.
inline constexpr double kNoiseFloor = 1e-13;

/// Per-component max |X(t) - X_j(t)| over {p / 2^K, p = 0 .. 2^K T}.
/// Samples are evaluated in parallel; the reduction order is fixed.
ErrorReport linf_error(const SplineSolution& sol, const ReferenceFn& reference, int grid_level,
                       double gamma);

/// Single-threaded reference for linf_error.
ErrorReport linf_error_serial(const SplineSolution& sol, const ReferenceFn& reference,
                              int grid_level, double gamma);

/// log2(e_j / e_{j+1}).
double estimate_order(double e_j, double e_j1);

/// Scalar test problem with exact solution t^2:
///   D^gamma x = -x + t^2 + 2 t^{2-gamma}/Gamma(3-gamma), x(0) = 0, T = 1.
FractionalProblem example1_problem(FractionalOrder gamma);

/// 2x2 system A = 1/2 [[-3, 1], [1, -3]], X0 = (1, 2), T = 1.
FractionalProblem example2_problem(FractionalOrder gamma);

ErrorReport run_example1(double gamma, int degree, int level);

ConvergenceReport run_example2(double gamma, int degree, const std::vector<int>& levels);

struct SweepOptions {
  int colloc_offset = 1;  // s = j + colloc_offset
  int grid_offset = 2;    // error sampled on level s + grid_offset ...
  std::optional<int> grid_level;  // ... unless fixed here
  double ic_weight = 1.0;
};

/// Solves `problem` at every level and measures the error against
/// `reference`. Levels run in parallel.
ConvergenceReport convergence_sweep(const FractionalProblem& problem, const ReferenceFn& reference,
                                    int degree, const std::vector<int>& levels,
                                    const SweepOptions& options = {});

/// Orders from a list of per-level reports.
std::vector<std::vector<double>> estimate_orders(const std::vector<ErrorReport>& errors);

/// True when every eigenvalue of A has negative real part. Advisory only.
bool stability_check(const SystemMatrix& a);

}  // namespace fracspline
