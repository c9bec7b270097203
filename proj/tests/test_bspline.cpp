#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fracspline/bspline.hpp"
#include "test_support.hpp"

using namespace fracspline;
using fracspline::testing::cox_de_boor;
using fracspline::testing::midpoint_grid;

TEST_CASE("truncated power") {
  CHECK(truncated_power(2.0, 3.0) == 8.0);
  CHECK(truncated_power(-1.0, 2.5) == 0.0);
  CHECK(truncated_power(0.5, 1.5) == doctest::Approx(std::exp(1.5 * std::log(0.5))).epsilon(1e-15));
  CHECK(truncated_power(0.5, 1.5) == doctest::Approx(0.35355339059327373).epsilon(1e-15));

  SUBCASE("zero argument is zero for every exponent, including p = 0") {
    CHECK(truncated_power(0.0, 0.0) == 0.0);
    CHECK(truncated_power(0.0, 2.5) == 0.0);
    CHECK(truncated_power(1e-300, 0.0) == 1.0);
  }
  CHECK_THROWS_AS(truncated_power(1.0, -0.5), std::invalid_argument);
}

TEST_CASE("binomial coefficients") {
  CHECK(binomial(4, 2) == 6.0);
  CHECK(binomial(5, 0) == 1.0);
  CHECK(binomial(5, 6) == 0.0);
  CHECK(binomial(20, 10) == 184756.0);
}

TEST_CASE("bspline_eval examples") {
  CHECK(bspline_eval(3, 2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(bspline_eval(3, -1.0) == 0.0);
  CHECK(bspline_eval(0, 0.5) == 1.0);
  CHECK(bspline_eval(1, 1.0) == 1.0);
  CHECK_THROWS_AS(bspline_eval(-1, 0.5), std::invalid_argument);
}

TEST_CASE("bspline_derivative examples") {
  CHECK(std::abs(bspline_derivative(3, 2.0)) <= 1e-15);
  CHECK(bspline_derivative(3, 0.5) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(bspline_derivative(3, 0.5) ==
        doctest::Approx(bspline_eval(2, 0.5) - bspline_eval(2, -0.5)).epsilon(1e-14));
  CHECK(bspline_derivative(1, 0.5) == 1.0);
  CHECK(bspline_derivative(1, 1.5) == -1.0);
  CHECK_THROWS_AS(bspline_derivative(0, 0.5), std::invalid_argument);
}

TEST_CASE("basis_eval applies dilation and translation") {
  CHECK(basis_eval({3, 0, 0}, 2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(basis_eval({3, 1, 0}, 1.0) == doctest::Approx(std::sqrt(2.0) * 2.0 / 3.0).epsilon(1e-15));
  CHECK(basis_eval({3, 2, 5}, 0.0) == 0.0);
  // Left-edge function at the origin: 2^{j/2} B_n(-ell).
  CHECK(basis_eval({3, 2, -1}, 0.0) == doctest::Approx(2.0 * bspline_eval(3, 1.0)));
}

TEST_CASE("basis_derivative matches finite differences") {
  const BasisIndex idx{4, 3, -2};
  for (double t : {0.05, 0.13, 0.31, 0.44}) {
    const double fd = fracspline::testing::central_difference(
        [&](double s) { return basis_eval(idx, s); }, t, 1e-7);
    CHECK(basis_derivative(idx, t) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("active_basis enumerates -n .. 2^j T - 1") {
  const ActiveBasis a = active_basis(3, 0, 1);
  CHECK(a.translates == std::vector<int>{-3, -2, -1, 0});
  CHECK(a.size() == 4);

  const ActiveBasis b = active_basis(3, 2, 1);
  CHECK(b.size() == 7);
  CHECK(b.translates.front() == -3);
  CHECK(b.translates.back() == 3);

  const ActiveBasis c = active_basis(4, 1, 2);
  CHECK(c.size() == 8);
  CHECK(c.translates.front() == -4);
  CHECK(c.translates.back() == 3);
  CHECK(c.column(-4) == 0);

  CHECK_THROWS_AS(active_basis(3, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(active_basis(3, 1, -2), std::invalid_argument);
}

TEST_CASE("refinement mask") {
  CHECK(refinement_mask(1) == std::vector<double>{0.5, 1.0, 0.5});
  CHECK(refinement_mask(3) == std::vector<double>{0.125, 0.5, 0.75, 0.5, 0.125});
  CHECK(refinement_mask(0) == std::vector<double>{1.0, 1.0});
}

TEST_CASE("agreement with the Cox-de Boor recursion") {
  for (int n = 0; n <= 5; ++n) {
    for (double t : midpoint_grid(-1.0, n + 2.0, 997)) {
      CHECK(std::abs(bspline_eval(n, t) - cox_de_boor(n, t)) <= 1e-13);
    }
  }
}

TEST_CASE("spline identities over a 1000-point grid") {
  for (int n = 0; n <= 4; ++n) {
    CAPTURE(n);
    const double horizon = 3.0;
    const auto grid = midpoint_grid(0.0, horizon, 1000);
    const auto mask = refinement_mask(n);
    double unity = 0.0;
    double refinement = 0.0;
    double derivative = 0.0;
    for (double t : grid) {
      double sum = 0.0;
      for (int ell = -n; ell <= static_cast<int>(std::ceil(t)) + n; ++ell) {
        sum += bspline_eval(n, t - ell);
      }
      unity = std::max(unity, std::abs(sum - 1.0));

      const double x = t * (n + 1) / horizon;  // sweep the whole support
      double refined = 0.0;
      for (std::size_t k = 0; k < mask.size(); ++k) refined += mask[k] * bspline_eval(n, 2 * x - k);
      refinement = std::max(refinement, std::abs(bspline_eval(n, x) - refined));

      CHECK(bspline_eval(n, x) >= 0.0);
      if (n >= 1) {
        const double diff = bspline_eval(n - 1, x) - bspline_eval(n - 1, x - 1.0);
        derivative = std::max(derivative, std::abs(bspline_derivative(n, x) - diff));
      }
    }
    CHECK(unity <= 1e-12);
    CHECK(refinement <= 1e-12);
    CHECK(derivative <= 1e-13);

    // Compact support is exact, not approximate.
    for (double t : {-5.0, -1.0, -1e-12, 0.0, n + 1.0, n + 1.0 + 1e-12, n + 7.0}) {
      CHECK(bspline_eval(n, t) == 0.0);
    }
  }
}

TEST_CASE("continuity at integer knots") {
  for (int n = 1; n <= 4; ++n) {
    for (int k = 0; k <= n + 1; ++k) {
      const double h = 1e-8;
      CHECK(std::abs(bspline_eval(n, k - h) - bspline_eval(n, k + h)) <= 1e-6);
    }
  }
}

TEST_CASE("dilation argument is exact for dyadic points") {
  CHECK(dilate(7, 3, 0.5) == 61.0);
  CHECK(dilate(0, -2, 0.0) == 2.0);
}
