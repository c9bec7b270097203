#include "fracspline/mittag_leffler.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracspline/errors.hpp"

namespace fracspline {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kNegligibleRun = 3;

void require_params(MLParams params) {
  if (!(params.alpha > 0.0) || !(params.beta > 0.0)) {
    throw std::invalid_argument("Mittag-Leffler: alpha and beta must be positive");
  }
}

double series_term(MLParams params, double z, int k) {
  const double arg = params.alpha * k + params.beta;
  if (z == 0.0) return k == 0 ? 1.0 / std::tgamma(arg) : 0.0;
  const double power = std::pow(z, k);
  if (arg < 170.0 && std::isfinite(power)) return power / std::tgamma(arg);
  const double sign = (z < 0.0 && k % 2 == 1) ? -1.0 : 1.0;
  return sign * std::exp(k * std::log(std::abs(z)) - std::lgamma(arg));
}

// Neumaier-compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace

double ml_series(MLParams params, double z, const MLOptions& options) {
  require_params(params);
  CompensatedSum acc;
  int negligible = 0;
  for (int k = 0; k < options.term_budget; ++k) {
    const double term = series_term(params, z, k);
    acc.add(term);
    if (std::abs(term) < kEps * std::abs(acc.value())) {
      if (++negligible == kNegligibleRun) return acc.value();
    } else {
      negligible = 0;
    }
  }
  throw NumericalError("Mittag-Leffler series did not converge within " +
                       std::to_string(options.term_budget) + " terms (z = " +
                       std::to_string(z) + ")");
}

double ml_peak_term(MLParams params, double z) {
  require_params(params);
  if (z == 0.0) return 1.0 / std::tgamma(params.beta);
  // log|term_k| = k log|z| - lgamma(alpha k + beta) is concave in k; its
  // real maximiser solves alpha digamma(alpha k + beta) = log|z|.
  const double log_z = std::log(std::abs(z));
  auto log_term = [&](double k) { return k * log_z - std::lgamma(params.alpha * k + params.beta); };
  auto slope = [&](double k) {
    return log_z - params.alpha * boost::math::digamma(params.alpha * k + params.beta);
  };
  double hi = 1.0;
  while (slope(hi) > 0.0 && hi < 1e300) hi *= 2.0;
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 0.5; ++it) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) > 0.0 ? lo : hi) = mid;
  }
  double best = log_term(0.0);
  for (double k : {std::floor(lo), std::ceil(lo), std::floor(hi), std::ceil(hi)}) {
    best = std::max(best, log_term(k));
  }
  return std::exp(best);
}

double ml_negative_axis_integral(double alpha, double x) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("ml_negative_axis_integral: alpha must lie in (0, 1)");
  }
  if (x < 0.0) throw std::invalid_argument("ml_negative_axis_integral: x must be >= 0");
  if (x == 0.0) return 1.0;

  const double pi = boost::math::constants::pi<double>();
  const double c = std::cos(alpha * pi);
  const double inv_alpha = 1.0 / alpha;

  // With w = x u the exponential becomes exp(-w^{1/alpha}), a fixed profile
  // that is negligible past w_end; the rational factor peaks near w = x.
  auto integrand = [&](double w) {
    return x * std::exp(-std::pow(w, inv_alpha)) / (w * w + 2.0 * w * c * x + x * x);
  };
  const double w_end = std::pow(745.0, alpha);
  std::vector<double> nodes{0.0, w_end};
  for (double b : {1.0, x}) {
    if (b < w_end) nodes.push_back(b);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end(),
                          [](double lhs, double rhs) { return rhs - lhs <= 1e-6 * rhs; }),
              nodes.end());

  // Abscissa tables are costly to build; keep one integrator per thread.
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    double error = 0.0;
    total += integrator.integrate(integrand, nodes[i], nodes[i + 1], 1e-15, &error);
    total_error += error;
  }
  const double scale = std::sin(alpha * pi) / (alpha * pi);
  if (scale * total_error > 1e-12) {
    throw NumericalError("Mittag-Leffler integral representation did not converge (x = " +
                         std::to_string(x) + ")");
  }
  return scale * total;
}

double ml_scalar(MLParams params, double z, const MLOptions& options) {
  require_params(params);
  if (!(std::abs(z) <= options.z_max)) {
    throw std::domain_error("Mittag-Leffler: |z| = " + std::to_string(std::abs(z)) +
                            " exceeds the trusted range " + std::to_string(options.z_max));
  }
  if (z >= 0.0 || ml_peak_term(params, z) <= options.max_term) {
    return ml_series(params, z, options);
  }
  if (params.alpha == 1.0 && params.beta == 1.0) return std::exp(z);
  if (params.beta == 1.0 && params.alpha < 1.0) return ml_negative_axis_integral(params.alpha, -z);
  throw std::domain_error("Mittag-Leffler: series untrustworthy at z = " + std::to_string(z) +
                          " and no alternative route for these parameters");
}

// ---------------------------------------------------------------------------
// SystemMatrix

SystemMatrix::SystemMatrix(Eigen::MatrixXd a, double condition_cap) : a_(std::move(a)) {
  if (a_.rows() == 0 || a_.rows() != a_.cols()) {
    throw std::invalid_argument("SystemMatrix: matrix must be square and non-empty");
  }
  symmetric_ = a_ == a_.transpose();
  diagonal_ = a_.isDiagonal(0.0);

  Eigen::EigenSolver<Eigen::MatrixXd> general(a_, true);
  if (general.info() != Eigen::Success) {
    throw NumericalError("SystemMatrix: eigenvalue computation failed");
  }
  spectrum_ = general.eigenvalues();

  if (diagonal_) {
    eigenvalues_ = a_.diagonal();
    eigenvectors_ = Eigen::MatrixXd::Identity(a_.rows(), a_.cols());
    eigenvectors_inv_ = *eigenvectors_;
    condition_ = 1.0;
    return;
  }
  if (symmetric_) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a_);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("SystemMatrix: symmetric eigen-solver failed");
    }
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
    eigenvectors_inv_ = solver.eigenvectors().transpose();
    condition_ = 1.0;
    return;
  }

  const double scale = std::max(1.0, spectral_radius());
  if ((spectrum_.imag().array().abs() > 1e-14 * scale).any()) return;
  const Eigen::MatrixXd v = general.eigenvectors().real();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(v);
  const auto& sigma = svd.singularValues();
  condition_ = sigma(sigma.size() - 1) > 0.0 ? sigma(0) / sigma(sigma.size() - 1)
                                             : std::numeric_limits<double>::infinity();
  if (!(condition_ < condition_cap)) return;
  eigenvalues_ = spectrum_.real();
  eigenvectors_ = v;
  eigenvectors_inv_ = v.fullPivLu().inverse();
}

double SystemMatrix::spectral_radius() const { return spectrum_.cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------------------
// Matrix function

Eigen::MatrixXd ml_matrix_eigen(MLParams params, double z_scale, const SystemMatrix& a,
                                const MLOptions& options) {
  if (!a.has_eigen_data()) {
    throw NumericalError("ml_matrix: eigenvector matrix missing or ill-conditioned (cond = " +
                         std::to_string(a.eigenvector_condition()) + ")");
  }
  const Eigen::VectorXd& lambda = a.eigenvalues();
  Eigen::VectorXd values(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    values[i] = ml_scalar(params, z_scale * lambda[i], options);
  }
  return a.eigenvectors() * values.asDiagonal() * a.eigenvectors_inverse();
}

Eigen::MatrixXd ml_matrix_series(MLParams params, double z_scale, const SystemMatrix& a,
                                 const MLOptions& options) {
  require_params(params);
  const Eigen::Index m = a.dim();
  const double radius = std::abs(z_scale) * a.spectral_radius();
  if (m > 8 || radius > 5.0) {
    throw std::domain_error("ml_matrix: series fallback needs m <= 8 and spectral radius <= 5");
  }
  if (ml_peak_term(params, -radius) > options.max_term) {
    throw std::domain_error("ml_matrix: matrix series untrustworthy for these parameters");
  }
  const Eigen::MatrixXd za = z_scale * a.matrix();
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(m, m);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd carry = Eigen::MatrixXd::Zero(m, m);
  int negligible = 0;
  for (int k = 0; k < options.term_budget; ++k) {
    const Eigen::MatrixXd term = power / std::tgamma(params.alpha * k + params.beta);
    for (Eigen::Index i = 0; i < m * m; ++i) {
      const double x = term.data()[i];
      double& s = sum.data()[i];
      const double t = s + x;
      carry.data()[i] += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
      s = t;
    }
    const double total = (sum + carry).norm();
    if (term.norm() < kEps * total || (total == 0.0 && term.norm() == 0.0)) {
      if (++negligible == kNegligibleRun) return sum + carry;
    } else {
      negligible = 0;
    }
    power = power * za;
  }
  throw NumericalError("ml_matrix: matrix series did not converge within the term budget");
}

Eigen::MatrixXd ml_matrix(MLParams params, double z_scale, const SystemMatrix& a,
                          const MLOptions& options) {
  if (a.is_diagonal()) {
    Eigen::VectorXd values(a.dim());
    for (Eigen::Index i = 0; i < a.dim(); ++i) {
      values[i] = ml_scalar(params, z_scale * a.matrix()(i, i), options);
    }
    return values.asDiagonal();
  }
  if (a.has_eigen_data()) return ml_matrix_eigen(params, z_scale, a, options);
  if (a.dim() <= 8 && std::abs(z_scale) * a.spectral_radius() <= 5.0) {
    return ml_matrix_series(params, z_scale, a, options);
  }
  throw std::domain_error(
      "ml_matrix: matrix is not diagonalizable with real spectrum and lies outside the "
      "series fallback range");
}

Eigen::VectorXd reference_solution(const FractionalProblem& problem, const SystemMatrix& a,
                                   double t) {
  if (!problem.homogeneous()) {
    throw std::invalid_argument(
        "reference_solution: Mittag-Leffler closed form covers only unforced problems");
  }
  if (t < 0.0) throw std::invalid_argument("reference_solution: t must be >= 0");
  if (t == 0.0) return problem.x0;
  const double g = problem.gamma.value();
  return ml_matrix({g, 1.0}, std::pow(t, g), a) * problem.x0;
}

Eigen::VectorXd reference_solution(const FractionalProblem& problem, double t) {
  return reference_solution(problem, SystemMatrix(problem.a), t);
}

}  // namespace fracspline
