#pragma once

#include <Eigen/Dense>

#include <vector>

#include "fracspline/fractional.hpp"

namespace fracspline {

/// One term of a forcing or exact-solution component.
///   poly:          coef * t^power
///   caputo_power:  coef * Gamma(power+1)/Gamma(power+1-gamma) * t^{power-gamma}
struct ForcingTerm {
  enum class Kind { poly, caputo_power };
  Kind kind = Kind::poly;
  double power = 0.0;
  double coef = 0.0;

  bool operator==(const ForcingTerm&) const = default;
};

using TermList = std::vector<ForcingTerm>;

double evaluate_terms(const TermList& terms, FractionalOrder gamma, double t);

/// D^gamma X(t) = A X(t) + F(t) on [0, T], X(0) = X0.
struct FractionalProblem {
  Eigen::MatrixXd a;
  Eigen::VectorXd x0;
  FractionalOrder gamma{0.5};
  int horizon = 1;
  // One term list per component; empty means homogeneous.
  std::vector<TermList> forcing;

  int dim() const { return static_cast<int>(x0.size()); }
  bool homogeneous() const;
  void validate() const;
  Eigen::VectorXd forcing_at(double t) const;
};

}  // namespace fracspline
