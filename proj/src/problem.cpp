#include "fracspline/problem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracspline {

double evaluate_terms(const TermList& terms, FractionalOrder gamma, double t) {
  double sum = 0.0;
  for (const ForcingTerm& term : terms) {
    switch (term.kind) {
      case ForcingTerm::Kind::poly:
        sum += term.coef * (term.power == 0.0 ? 1.0 : std::pow(t, term.power));
        break;
      case ForcingTerm::Kind::caputo_power:
        sum += term.coef * caputo_of_power(term.power, gamma, t);
        break;
    }
  }
  return sum;
}

bool FractionalProblem::homogeneous() const {
  for (const TermList& terms : forcing) {
    if (!terms.empty()) return false;
  }
  return true;
}

void FractionalProblem::validate() const {
  const Eigen::Index m = x0.size();
  if (m < 1) throw std::invalid_argument("problem: state dimension m must be >= 1");
  if (a.rows() != m || a.cols() != m) {
    throw std::invalid_argument("problem: A must be " + std::to_string(m) + "x" +
                                std::to_string(m) + ", got " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()));
  }
  if (horizon < 1) throw std::invalid_argument("problem: horizon T must be >= 1");
  if (!forcing.empty() && static_cast<Eigen::Index>(forcing.size()) != m) {
    throw std::invalid_argument("problem: forcing must have one term list per component");
  }
  for (const TermList& terms : forcing) {
    for (const ForcingTerm& term : terms) {
      if (term.kind == ForcingTerm::Kind::caputo_power && term.power < 1.0) {
        throw std::invalid_argument("problem: caputo_power terms need power >= 1");
      }
      if (term.kind == ForcingTerm::Kind::poly && term.power < 0.0) {
        throw std::invalid_argument("problem: poly terms need power >= 0");
      }
    }
  }
}

Eigen::VectorXd FractionalProblem::forcing_at(double t) const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(x0.size());
  for (std::size_t i = 0; i < forcing.size(); ++i) {
    f[static_cast<Eigen::Index>(i)] = evaluate_terms(forcing[i], gamma, t);
  }
  return f;
}

}  // namespace fracspline
