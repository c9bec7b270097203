#include "fracspline/fractional.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

#include "fracspline/errors.hpp"

namespace fracspline {

namespace {

constexpr int kMaxSeriesTerms = 200;
constexpr int kDifferenceTerms = 96;
constexpr std::size_t kMaxRefinements = 12;
constexpr double kSeriesEps = 1e-17;

void require_open_order(double gamma, const char* what) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument(std::string(what) + ": order must lie in (0, 1), got " +
                                std::to_string(gamma));
  }
}

}  // namespace

FractionalOrder::FractionalOrder(double gamma) : gamma_(gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("fractional order must satisfy 0 < gamma <= 1, got " +
                                std::to_string(gamma));
  }
}

// ---------------------------------------------------------------------------
// FractionalDifference

FractionalDifference::FractionalDifference(int degree, double alpha)
    : degree_(degree), alpha_(alpha), center_(0.5 * (degree + 1)) {
  if (degree < 0) throw std::invalid_argument("FractionalDifference: negative degree");
  coeffs_.assign(kDifferenceTerms, 0.0);
  double binom = 1.0;  // C(alpha, m)
  for (int m = 0; m < kDifferenceTerms; ++m) {
    if (m > 0) binom *= (alpha_ - (m - 1)) / m;
    if (m < degree + 1 || (m - degree - 1) % 2 != 0) continue;
    double moment = 0.0;
    double sign = 1.0;
    for (int k = 0; k <= degree + 1; ++k) {
      moment += sign * binomial(degree + 1, k) * std::pow(k - center_, m);
      sign = -sign;
    }
    coeffs_[m] = (m % 2 == 0 ? 1.0 : -1.0) * binom * moment;
  }
}

double FractionalDifference::direct(double x) const {
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 0; k <= degree_ + 1 && k < x; ++k) {
    sum += sign * binomial(degree_ + 1, k) * truncated_power(x - k, alpha_);
    sign = -sign;
  }
  return sum;
}

double FractionalDifference::far_field(double x) const {
  const double y = x - center_;
  if (!(y > center_)) {
    throw std::domain_error("FractionalDifference: far-field expansion needs x > n + 1");
  }
  const double inv = 1.0 / y;
  double power = std::pow(inv, degree_ + 1);
  const double step = inv * inv;
  double sum = 0.0;
  for (int m = degree_ + 1; m < kDifferenceTerms; m += 2) {
    const double term = coeffs_[m] * power;
    sum += term;
    if (std::abs(term) <= kSeriesEps * std::abs(sum)) break;
    power *= step;
  }
  return std::pow(y, alpha_) * sum;
}

double FractionalDifference::operator()(double x) const {
  if (x <= 0.0) return 0.0;
  // Integer alpha makes the difference a piecewise polynomial that vanishes
  // identically past the last knot.
  if (alpha_ == std::floor(alpha_) && alpha_ <= degree_ && x >= degree_ + 1) return 0.0;
  return x >= far_threshold() ? far_field(x) : direct(x);
}

// ---------------------------------------------------------------------------
// EdgeExpansion

EdgeExpansion::EdgeExpansion(int degree, double gamma, int translate)
    : degree_(degree), gamma_(gamma), translate_(translate) {
  require_open_order(gamma, "EdgeExpansion");
  if (degree < 1) throw std::invalid_argument("EdgeExpansion: degree must be >= 1");
  if (translate < -degree || translate > -1) {
    throw std::invalid_argument("EdgeExpansion: translate must lie in [-n, -1], got " +
                                std::to_string(translate));
  }
  inv_gamma_n1_ = 1.0 / std::tgamma(degree + 1 - gamma);
  series_scale_ = 1.0 / (factorial(degree - 1) * std::tgamma(1.0 - gamma));

  for (int r = 0; r <= -translate - 1; ++r) {
    Row row;
    row.weight = (r % 2 == 0 ? 1.0 : -1.0) * binomial(degree + 1, r);
    row.length = static_cast<double>(-translate - r);
    row.poly.resize(static_cast<std::size_t>(degree));
    for (int p = 0; p <= degree - 1; ++p) {
      const int q = degree - 1 - p;
      double prod = 1.0;  // empty product when p = n - 1
      for (int s = 1; s <= q; ++s) prod *= gamma - s;
      const double sign = ((degree - p) % 2 == 0) ? 1.0 : -1.0;
      row.poly[p] = sign * std::pow(row.length, q) / factorial(q) * prod;
    }
    rows_.push_back(std::move(row));
  }
}

double EdgeExpansion::closed_bracket(const Row& row, double t) const {
  const double c = t + row.length;  // t - ell - r
  double inner = 0.0;
  for (int p = degree_ - 1; p >= 0; --p) inner = inner * c + row.poly[p];
  return inv_gamma_n1_ * (std::pow(c, degree_ - gamma_) + std::pow(t, 1.0 - gamma_) * inner);
}

double EdgeExpansion::series_bracket(const Row& row, double t) const {
  // int_0^L s^{n-1} (c - s)^{-gamma} ds = c^{-gamma} sum_m (gamma)_m/m! L^{n+m} / ((n+m) c^m)
  const double c = t + row.length;
  const double ratio = row.length / c;
  double pochhammer = 1.0;  // (gamma)_m / m!
  double power = std::pow(row.length, degree_);
  double sum = 0.0;
  for (int m = 0; m < kMaxSeriesTerms; ++m) {
    if (m > 0) {
      pochhammer *= (gamma_ + m - 1) / m;
      power *= ratio;
    }
    const double term = pochhammer * power / (degree_ + m);
    sum += term;
    if (term <= kSeriesEps * sum) break;
  }
  return series_scale_ * std::pow(c, -gamma_) * sum;
}

double EdgeExpansion::correction_closed_form(double t) const {
  if (t <= 0.0) return 0.0;
  double sum = 0.0;
  for (const Row& row : rows_) sum += row.weight * closed_bracket(row, t);
  return sum;
}

double EdgeExpansion::correction_series(double t) const {
  if (t <= 0.0) return 0.0;
  double sum = 0.0;
  for (const Row& row : rows_) sum += row.weight * series_bracket(row, t);
  return sum;
}

double EdgeExpansion::correction(double t) const {
  if (t <= 0.0) return 0.0;
  double sum = 0.0;
  for (const Row& row : rows_) {
    sum += row.weight * (t >= row.length ? series_bracket(row, t) : closed_bracket(row, t));
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Free functions

double caputo_interior(int degree, double gamma, int translate, double t) {
  require_open_order(gamma, "caputo_interior");
  if (degree < 1) throw std::invalid_argument("caputo_interior: degree must be >= 1");
  if (translate < 0) {
    throw std::invalid_argument("caputo_interior: translate must be >= 0; use caputo_edge");
  }
  const double x = t - translate;
  if (x <= 0.0) return 0.0;
  return FractionalDifference(degree, degree - gamma)(x) / std::tgamma(degree + 1 - gamma);
}

double caputo_edge(int degree, double gamma, int translate, double t) {
  const EdgeExpansion edge(degree, gamma, translate);
  if (t <= 0.0) return 0.0;
  const double head =
      FractionalDifference(degree, degree - gamma)(t - translate) / std::tgamma(degree + 1 - gamma);
  return head - edge.correction(t);
}

double caputo_basis(const BasisIndex& idx, FractionalOrder gamma, double t) {
  if (t < 0.0) throw std::invalid_argument("caputo_basis: t must be >= 0");
  if (gamma.is_classical()) return basis_derivative(idx, t);
  if (t == 0.0) return 0.0;
  const double scale = std::ldexp(1.0, idx.level);
  const double x = scale * t;
  const double raw = idx.is_edge() ? caputo_edge(idx.degree, gamma.value(), idx.translate, x)
                                   : caputo_interior(idx.degree, gamma.value(), idx.translate, x);
  return std::sqrt(scale) * std::pow(scale, gamma.value()) * raw;
}

// ---------------------------------------------------------------------------
// CaputoBasis

CaputoBasis::CaputoBasis(int degree, FractionalOrder gamma)
    : degree_(degree),
      gamma_(gamma),
      difference_(degree, gamma.is_classical() ? degree - 1.0 : degree - gamma.value()) {
  if (degree < 1) throw std::invalid_argument("CaputoBasis: degree must be >= 1");
  if (!gamma.is_classical()) {
    inv_gamma_n1_ = 1.0 / std::tgamma(degree + 1 - gamma.value());
    edges_.reserve(static_cast<std::size_t>(degree));
    for (int ell = -degree; ell <= -1; ++ell) edges_.emplace_back(degree, gamma.value(), ell);
  }
}

double CaputoBasis::unscaled(int translate, double x) const {
  if (gamma_.is_classical()) return bspline_derivative(degree_, x - translate);
  const double head = inv_gamma_n1_ * difference_(x - translate);
  if (translate >= 0 || x <= 0.0) return x <= 0.0 ? 0.0 : head;
  return head - edges_[static_cast<std::size_t>(translate + degree_)].correction(x);
}

double CaputoBasis::operator()(int level, int translate, double t) const {
  const double scale = std::ldexp(1.0, level);
  const double x = scale * t;
  const double factor = gamma_.is_classical() ? std::sqrt(scale) * scale
                                              : std::sqrt(scale) * std::pow(scale, gamma_.value());
  return factor * unscaled(translate, x);
}

// ---------------------------------------------------------------------------
// Quadrature oracle

double caputo_quadrature(const std::function<double(double)>& f_prime, double gamma, double t,
                         double tol, std::span<const double> breakpoints) {
  require_open_order(gamma, "caputo_quadrature");
  if (!(t > 0.0)) throw std::invalid_argument("caputo_quadrature: t must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("caputo_quadrature: tol must be positive");

  std::vector<double> nodes{0.0, t};
  for (double b : breakpoints) {
    if (b > 0.0 && b < t) nodes.push_back(b);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  // tanh-sinh copes with algebraic endpoint singularities of both the kernel
  // and f'; the complement argument keeps t - tau accurate next to t.
  boost::math::quadrature::tanh_sinh<double> rule(kMaxRefinements);
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double lo = nodes[i];
    const double hi = nodes[i + 1];
    const bool last = i + 2 == nodes.size();
    auto integrand = [&](double tau, double tc) {
      const double gap = (last && tc > 0.0) ? tc : t - tau;
      return f_prime(tau) * std::pow(gap, -gamma);
    };
    double error = 0.0;
    double l1 = 0.0;
    try {
      total += rule.integrate(integrand, lo, hi, 1e-14, &error, &l1);
    } catch (const boost::math::evaluation_error& e) {
      throw NumericalError(std::string("caputo_quadrature: ") + e.what());
    } catch (const std::domain_error& e) {
      throw NumericalError(std::string("caputo_quadrature: ") + e.what());
    }
    if (!std::isfinite(error)) error = std::numeric_limits<double>::infinity();
    total_error += error;
  }
  const double scale = 1.0 / std::tgamma(1.0 - gamma);
  if (!(total_error * scale <= tol) || !std::isfinite(total)) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "caputo_quadrature: estimated error %.3g exceeds tolerance %.3g", total_error * scale,
                  tol);
    throw NumericalError(msg);
  }
  return scale * total;
}

double caputo_of_power(double p, FractionalOrder gamma, double t) {
  if (p < 1.0) throw std::invalid_argument("caputo_of_power: power must be >= 1");
  if (t < 0.0) throw std::invalid_argument("caputo_of_power: t must be >= 0");
  const double g = gamma.value();
  const double coef = p + 1.0 < 170.0 ? std::tgamma(p + 1.0) / std::tgamma(p + 1.0 - g)
                                       : std::exp(std::lgamma(p + 1.0) - std::lgamma(p + 1.0 - g));
  const double e = p - g;
  if (e == 0.0) return coef;
  return coef * truncated_power(t, e);
}

}  // namespace fracspline
