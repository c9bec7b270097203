#include "fracspline/bspline.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracspline {

double truncated_power(double t, double p) {
  if (p < 0.0) {
    throw std::invalid_argument("truncated_power: exponent must be non-negative");
  }
  if (t <= 0.0) return 0.0;
  if (p == 0.0) return 1.0;
  return std::pow(t, p);
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  unsigned long long c = 1;
  for (int i = 1; i <= k; ++i) {
    // c * (n - k + i) is divisible by i at every step.
    c = c * static_cast<unsigned long long>(n - k + i) / static_cast<unsigned long long>(i);
  }
  return static_cast<double>(c);
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

namespace {

void require_degree(int degree, int min_degree, const char* what) {
  if (degree < min_degree) {
    throw std::invalid_argument(std::string(what) + ": degree must be >= " +
                                std::to_string(min_degree) + ", got " +
                                std::to_string(degree));
  }
}

}  // namespace

double bspline_eval(int degree, double t) {
  require_degree(degree, 0, "bspline_eval");
  if (t <= 0.0 || t >= degree + 1) return 0.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 0; k <= degree + 1 && k < t; ++k) {
    sum += sign * binomial(degree + 1, k) * truncated_power(t - k, degree);
    sign = -sign;
  }
  return sum / factorial(degree);
}

double bspline_derivative(int degree, double t) {
  require_degree(degree, 1, "bspline_derivative");
  if (t <= 0.0 || t >= degree + 1) return 0.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int r = 0; r <= degree + 1 && r < t; ++r) {
    sum += sign * binomial(degree + 1, r) * truncated_power(t - r, degree - 1);
    sign = -sign;
  }
  return sum / factorial(degree - 1);
}

double dilate(int level, int translate, double t) {
  return std::fma(std::ldexp(1.0, level), t, -static_cast<double>(translate));
}

double basis_eval(const BasisIndex& idx, double t) {
  const double scale = std::ldexp(1.0, idx.level);
  return std::sqrt(scale) * bspline_eval(idx.degree, dilate(idx.level, idx.translate, t));
}

double basis_derivative(const BasisIndex& idx, double t) {
  const double scale = std::ldexp(1.0, idx.level);
  return std::sqrt(scale) * scale *
         bspline_derivative(idx.degree, dilate(idx.level, idx.translate, t));
}

ActiveBasis active_basis(int degree, int level, int horizon) {
  require_degree(degree, 0, "active_basis");
  if (horizon <= 0) {
    throw std::invalid_argument("active_basis: horizon T must be a positive integer");
  }
  if (level < 0) {
    throw std::invalid_argument("active_basis: level must be non-negative");
  }
  ActiveBasis basis{degree, level, horizon, {}};
  const int last = (1 << level) * horizon - 1;
  basis.translates.reserve(static_cast<std::size_t>(last + degree + 1));
  for (int ell = -degree; ell <= last; ++ell) basis.translates.push_back(ell);
  return basis;
}

std::vector<double> refinement_mask(int degree) {
  require_degree(degree, 0, "refinement_mask");
  std::vector<double> mask(static_cast<std::size_t>(degree + 2));
  const double scale = std::ldexp(1.0, -degree);
  for (int k = 0; k <= degree + 1; ++k) mask[k] = scale * binomial(degree + 1, k);
  return mask;
}

}  // namespace fracspline
