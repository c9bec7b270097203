#pragma once

#include <stdexcept>
#include <string>

namespace fracspline {

// Failure of a numerical procedure on valid input: rank deficiency,
// non-convergence, ill-conditioning. Invalid input raises
// std::invalid_argument / std::domain_error instead.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fracspline
