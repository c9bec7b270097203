#pragma once

#include <exception>

namespace fracspline::detail {

// Exceptions must not escape an OpenMP region; the first one is kept and
// rethrown after the loop.
class FirstError {
 public:
  void capture() {
#pragma omp critical(fracspline_first_error)
    {
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

}  // namespace fracspline::detail
