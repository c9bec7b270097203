#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>

#include "fracspline/problem.hpp"

namespace fracspline {

struct MLParams {
  double alpha = 1.0;  // gamma > 0
  double beta = 1.0;   // > 0
};

struct MLOptions {
  double z_max = 50.0;
  int term_budget = 500;
  // The plain series is trusted while its largest term stays below this.
  double max_term = 1e2;
};

/// E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha k + beta).
///
/// Summed with Neumaier compensation and truncated after three consecutive
/// terms below eps * |partial sum|. On the negative axis the series cancels
/// catastrophically once its terms grow large (small alpha or large |z|);
/// there, for beta = 1 and 0 < alpha < 1, the value comes from the
/// completely-monotone integral representation instead, and for
/// alpha = beta = 1 from exp(z). Any other untrusted case throws
/// std::domain_error, as does |z| > z_max.
double ml_scalar(MLParams params, double z, const MLOptions& options = {});

/// Raw compensated series, no routing. Throws NumericalError when the term
/// budget runs out.
double ml_series(MLParams params, double z, const MLOptions& options = {});

/// Largest |z^k / Gamma(alpha k + beta)| over k.
double ml_peak_term(MLParams params, double z);

/// E_alpha(-x), x >= 0, 0 < alpha < 1, by quadrature of
///   sin(alpha pi)/(alpha pi) int_0^inf exp(-x^{1/alpha} u^{1/alpha}) / (u^2 + 2u cos(alpha pi) + 1) du.
double ml_negative_axis_integral(double alpha, double x);

/// Real square matrix with eigen data cached when it is diagonalizable with
/// real spectrum and a well-conditioned eigenvector matrix.
class SystemMatrix {
 public:
  explicit SystemMatrix(Eigen::MatrixXd a, double condition_cap = 1e8);

  const Eigen::MatrixXd& matrix() const { return a_; }
  Eigen::Index dim() const { return a_.rows(); }
  bool is_symmetric() const { return symmetric_; }
  bool is_diagonal() const { return diagonal_; }
  bool has_eigen_data() const { return eigenvalues_.has_value(); }

  const Eigen::VectorXd& eigenvalues() const { return *eigenvalues_; }
  const Eigen::MatrixXd& eigenvectors() const { return *eigenvectors_; }
  const Eigen::MatrixXd& eigenvectors_inverse() const { return *eigenvectors_inv_; }
  double eigenvector_condition() const { return condition_; }

  /// Full (possibly complex) spectrum.
  const Eigen::VectorXcd& spectrum() const { return spectrum_; }
  double spectral_radius() const;

 private:
  Eigen::MatrixXd a_;
  bool symmetric_ = false;
  bool diagonal_ = false;
  Eigen::VectorXcd spectrum_;
  std::optional<Eigen::VectorXd> eigenvalues_;
  std::optional<Eigen::MatrixXd> eigenvectors_;
  std::optional<Eigen::MatrixXd> eigenvectors_inv_;
  double condition_ = 0.0;
};

/// E_{alpha,beta}(z A) = sum_k (z A)^k / Gamma(alpha k + beta).
/// Diagonal matrices short-circuit; otherwise the eigen route
/// V diag(E(z lambda_i)) V^{-1} is used when eigen data exists, with the
/// direct matrix series as fallback for m <= 8 and spectral radius of zA <= 5.
Eigen::MatrixXd ml_matrix(MLParams params, double z_scale, const SystemMatrix& a,
                          const MLOptions& options = {});

Eigen::MatrixXd ml_matrix_eigen(MLParams params, double z_scale, const SystemMatrix& a,
                                const MLOptions& options = {});
Eigen::MatrixXd ml_matrix_series(MLParams params, double z_scale, const SystemMatrix& a,
                                 const MLOptions& options = {});

/// Exact solution X(t) = E_{gamma,1}(t^gamma A) X0 of a homogeneous problem.
Eigen::VectorXd reference_solution(const FractionalProblem& problem, double t);

/// Same, reusing a prepared SystemMatrix for repeated evaluation.
Eigen::VectorXd reference_solution(const FractionalProblem& problem, const SystemMatrix& a,
                                   double t);

}  // namespace fracspline
