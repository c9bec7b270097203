#pragma once

#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracspline/collocation.hpp"
#include "fracspline/problem.hpp"

namespace fracspline {

/// Parse or validation failure, anchored to a line of the source.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);

  int line() const { return line_; }

 private:
  int line_;
};

/// Batch run description. Text form:
///
///   [problem]
///   m = 2
///   A = -1.5 0.5 0.5 -1.5        # row-major
///   X0 = 1 2
///   gamma = 0.5
///   T = 1                        # optional, default 1
///   forcing.1 = poly 2 1; caputo_power 2 1
///   exact.1 = poly 2 1
///
///   [discretization]
///   n = 3
///   j = 8
///   s = j+1
///   ic_weight = 1
///
///   [output]
///   dir = out
///   grid_level = 11
struct RunConfig {
  struct Problem {
    int m = 1;
    std::vector<double> a;
    std::vector<double> x0;
    double gamma = 0.5;
    int horizon = 1;
    std::vector<TermList> forcing;  // per component, possibly empty
    std::vector<TermList> exact;    // per component; all-or-nothing

    bool operator==(const Problem&) const = default;
  };
  struct Discretization {
    int degree = 3;
    int level = 4;
    std::optional<int> colloc_level;  // unset means j + 1
    double ic_weight = 1.0;

    bool operator==(const Discretization&) const = default;
  };
  struct Output {
    std::string dir = ".";
    std::optional<int> grid_level;  // unset means s + 2

    bool operator==(const Output&) const = default;
  };

  Problem problem;
  Discretization discretization;
  Output output;

  bool operator==(const RunConfig&) const = default;

  FractionalProblem to_problem() const;
  CollocationConfig to_collocation() const;
  int sample_grid_level() const;
  bool has_exact() const { return !problem.exact.empty(); }
};

RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Canonical text form; parse_config(dump_config(c)) == c.
std::string dump_config(const RunConfig& config);

/// Formats a double with 17 significant digits.
std::string format_double(double value);

}  // namespace fracspline
