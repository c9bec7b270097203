#pragma once

#include <cstddef>
#include <vector>

namespace fracspline {

/// One basis function phi_{j,ell}(t) = 2^{j/2} B_n(2^j t - ell) of the
/// level-j scaling space. Left-edge functions have -n <= ell <= -1.
struct BasisIndex {
  int degree = 3;
  int level = 0;
  int translate = 0;

  bool is_edge() const { return translate < 0; }
  bool operator==(const BasisIndex&) const = default;
};

/// The finite set of translates whose support meets [0, horizon].
struct ActiveBasis {
  int degree = 0;
  int level = 0;
  int horizon = 1;
  std::vector<int> translates;  // -degree ... 2^level * horizon - 1

  std::size_t size() const { return translates.size(); }
  // Column position of a translate inside the ordered list.
  std::size_t column(int translate) const {
    return static_cast<std::size_t>(translate + degree);
  }
};

// (max(0, t))^p, with the convention T_p(0) = 0 for every p >= 0.
double truncated_power(double t, double p);

// Exact for n <= 60.
double binomial(int n, int k);

double factorial(int n);

/// Cardinal B-spline of degree n, supported on [0, n+1], evaluated through
/// the (n+1)-th backward difference of the truncated power T_n.
double bspline_eval(int degree, double t);

/// First derivative of B_n; requires n >= 1.
double bspline_derivative(int degree, double t);

double basis_eval(const BasisIndex& idx, double t);

/// d/dt phi_{j,ell}(t) = 2^{j/2} 2^j B_n'(2^j t - ell).
double basis_derivative(const BasisIndex& idx, double t);

/// Dilated argument 2^j t - ell.
double dilate(int level, int translate, double t);

ActiveBasis active_basis(int degree, int level, int horizon);

/// Two-scale coefficients a_k = 2^{-n} C(n+1, k) with
/// B_n(t) = sum_k a_k B_n(2t - k).
std::vector<double> refinement_mask(int degree);

}  // namespace fracspline
