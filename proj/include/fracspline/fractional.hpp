#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fracspline/bspline.hpp"

namespace fracspline {

/// Order of the Caputo derivative, 0 < gamma <= 1. gamma == 1 selects the
/// ordinary first derivative.
class FractionalOrder {
 public:
  explicit FractionalOrder(double gamma);

  double value() const { return gamma_; }
  bool is_classical() const { return gamma_ == 1.0; }

  bool operator==(const FractionalOrder&) const = default;

 private:
  double gamma_;
};

/// (n+1)-th backward difference of the fractional truncated power,
/// Delta^{n+1} T_alpha(x). For arguments far right of the knots the direct
/// sum cancels badly, so it switches to the centred binomial expansion
///   y^alpha sum_m C(alpha, m) (-1)^m M_m y^{-m},  y = x - (n+1)/2,
/// where M_m are the central moments of the difference stencil.
class FractionalDifference {
 public:
  FractionalDifference(int degree, double alpha);

  double operator()(double x) const;
  double direct(double x) const;
  double far_field(double x) const;

  // Arguments at or beyond this use far_field().
  double far_threshold() const { return 3.0 * center_; }

 private:
  int degree_;
  double alpha_;
  double center_;
  std::vector<double> coeffs_;  // index m, zero unless m >= n+1 and m = n+1 (mod 2)
};

/// Closed form of the boundary term of a left-edge function B_{n,ell},
/// -n <= ell <= -1:
///   (1/Gamma(1-gamma)) int_0^{-ell} B_n'(tau) (t - ell - tau)^{-gamma} dtau
/// expanded as a double sum over r = 0..-ell-1 and p = 0..n-1. Built once
/// per (n, gamma, ell).
class EdgeExpansion {
 public:
  EdgeExpansion(int degree, double gamma, int translate);

  int translate() const { return translate_; }

  /// Boundary term, switching per r to a convergent power series in
  /// L/(t+L) once t >= L so large t does not cancel catastrophically.
  double correction(double t) const;

  /// Boundary term from the printed double-sum expansion only.
  double correction_closed_form(double t) const;
  double correction_series(double t) const;

 private:
  struct Row {
    double weight;  // (-1)^r C(n+1, r)
    double length;  // L = -ell - r
    std::vector<double> poly;  // coefficient of (t - ell - r)^p
  };

  double closed_bracket(const Row& row, double t) const;
  double series_bracket(const Row& row, double t) const;

  int degree_;
  double gamma_;
  int translate_;
  double inv_gamma_n1_;  // 1 / Gamma(n + 1 - gamma)
  double series_scale_;  // 1 / ((n-1)! Gamma(1 - gamma))
  std::vector<Row> rows_;
};

/// D^gamma B_{n,ell}(t) for an interior translate ell >= 0 and 0 < gamma < 1.
double caputo_interior(int degree, double gamma, int translate, double t);

/// D^gamma B_{n,ell}(t) for a left-edge translate -n <= ell <= -1.
double caputo_edge(int degree, double gamma, int translate, double t);

/// D^gamma phi_{j,ell}(t), using the dilation rule
/// D^gamma f(2^j t) = 2^{gamma j} (D^gamma f)(2^j t).
double caputo_basis(const BasisIndex& idx, FractionalOrder gamma, double t);

/// Caputo derivatives of every phi_{j,ell} of one degree and order, with the
/// gamma-dependent constants and edge tables precomputed. Read-only after
/// construction, so one instance can be shared across threads.
class CaputoBasis {
 public:
  CaputoBasis(int degree, FractionalOrder gamma);

  int degree() const { return degree_; }
  FractionalOrder order() const { return gamma_; }

  /// Derivative of the unscaled translate B_n(. - ell) at x.
  double unscaled(int translate, double x) const;
  double operator()(int level, int translate, double t) const;

 private:
  int degree_;
  FractionalOrder gamma_;
  double inv_gamma_n1_ = 0.0;
  FractionalDifference difference_;
  std::vector<EdgeExpansion> edges_;  // translate -n at index 0
};

/// Caputo derivative (1/Gamma(1-gamma)) int_0^t f'(tau) (t - tau)^{-gamma} dtau
/// by tanh-sinh quadrature on the pieces between breakpoints. `breakpoints`
/// lists points of reduced smoothness of f' inside (0, t). Throws
/// NumericalError when the estimated absolute error exceeds `tol`.
double caputo_quadrature(const std::function<double(double)>& f_prime, double gamma,
                         double t, double tol, std::span<const double> breakpoints = {});

/// D^gamma t^p = Gamma(p+1)/Gamma(p+1-gamma) t^{p-gamma}, p >= 1.
double caputo_of_power(double p, FractionalOrder gamma, double t);

}  // namespace fracspline
