#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <stdexcept>

#include "fracspline/errors.hpp"
#include "fracspline/mittag_leffler.hpp"
#include "test_support.hpp"

using namespace fracspline;
using fracspline::testing::Rng;

namespace {

using Big = boost::multiprecision::cpp_bin_float_50;

// 200-term partial sum in 50-digit arithmetic.
double extended_series(double alpha, double beta, double z, int terms = 200) {
  Big sum = 0;
  Big power = 1;
  const Big zz = z;
  for (int k = 0; k < terms; ++k) {
    sum += power / boost::multiprecision::tgamma(Big(alpha) * k + Big(beta));
    power *= zz;
  }
  return sum.convert_to<double>();
}

Eigen::MatrixXd random_symmetric(Rng& rng, int m, double radius) {
  Eigen::MatrixXd a(m, m);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k <= i; ++k) a(i, k) = a(k, i) = rng.uniform(-1.0, 1.0);
  }
  const double rho = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues().cwiseAbs().maxCoeff();
  return a * (rng.uniform(0.1, radius) / rho);
}

Eigen::MatrixXd example2_matrix() {
  Eigen::MatrixXd a(2, 2);
  a << -1.5, 0.5, 0.5, -1.5;
  return a;
}

}  // namespace

TEST_CASE("ml_scalar examples") {
  CHECK(ml_scalar({1.0, 1.0}, 1.0) == doctest::Approx(2.718281828459045).epsilon(1e-15));
  CHECK(ml_scalar({0.5, 1.0}, 0.0) == 1.0);
  CHECK(std::abs(ml_scalar({0.5, 1.0}, -1.0) - extended_series(0.5, 1.0, -1.0)) <= 1e-12);
  // E_{1/2}(z) = exp(z^2) erfc(-z)
  CHECK(ml_scalar({0.5, 1.0}, -1.0) ==
        doctest::Approx(std::exp(1.0) * std::erfc(1.0)).epsilon(1e-13));
}

TEST_CASE("ml_scalar against 700-digit oracle values") {
  // tests/oracles/mittag_leffler_oracle.py
  struct Case {
    double alpha;
    double z;
    double value;
  };
  const Case cases[] = {
      {0.5, -1.0, 0.42758357615580700441},  {0.5, -2.0, 0.25539567631050574387},
      {0.1, -2.0, 0.32001533595972739861},  {0.1, -1.0, 0.48556446431108210159},
      {0.1, -0.5, 0.65432446028800192845},  {0.25, -2.0, 0.29810179369365760367},
      {0.25, -1.0, 0.46385276080171328694}, {0.75, -2.0, 0.20207848341295445435},
      {0.9, -5.0, 0.034431324804098418323}, {0.3, -4.0, 0.16650174431551664971},
  };
  for (const Case& c : cases) {
    CAPTURE(c.alpha);
    CAPTURE(c.z);
    CHECK(std::abs(ml_scalar({c.alpha, 1.0}, c.z) - c.value) <= 1e-12);
  }
}

TEST_CASE("ml_scalar refusals") {
  CHECK_THROWS_AS(ml_scalar({0.5, 1.0}, 51.0), std::domain_error);
  CHECK_THROWS_AS(ml_scalar({0.5, 1.0}, -50.5), std::domain_error);
  CHECK_THROWS_AS(ml_scalar({0.0, 1.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ml_scalar({0.5, -1.0}, 1.0), std::invalid_argument);
  MLOptions tight;
  tight.term_budget = 5;
  CHECK_THROWS_AS(ml_series({0.5, 1.0}, 1.0, tight), NumericalError);
  // Untrusted series with no alternative route.
  CHECK_THROWS_AS(ml_scalar({0.2, 2.0}, -20.0), std::domain_error);
}

TEST_CASE("exponential identity") {
  double worst = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double z = -2.0 + 0.01 * i;
    worst = std::max(worst, std::abs(ml_scalar({1.0, 1.0}, z) - std::exp(z)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("k = 0 normalization") {
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    const double alpha = rng.uniform(0.05, 2.0);
    const double beta = rng.uniform(0.1, 3.0);
    CHECK(ml_scalar({alpha, beta}, 0.0) == doctest::Approx(1.0 / std::tgamma(beta)).epsilon(1e-15));
  }
}

TEST_CASE("series and integral representation agree where both are trusted") {
  for (double alpha : {0.5, 0.6, 0.75, 0.9}) {
    for (double x = 0.1; x <= 2.0; x += 0.1) {
      if (ml_peak_term({alpha, 1.0}, -x) > 1e2) continue;
      CHECK(std::abs(ml_negative_axis_integral(alpha, x) - ml_series({alpha, 1.0}, -x)) <= 1e-12);
    }
  }
  CHECK(ml_negative_axis_integral(0.5, 0.0) == 1.0);
  CHECK_THROWS_AS(ml_negative_axis_integral(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ml_negative_axis_integral(0.5, -1.0), std::invalid_argument);
}

TEST_CASE("monotone decay on the negative axis") {
  for (double alpha : {0.1, 0.25, 0.5, 0.75, 0.95}) {
    double previous = ml_scalar({alpha, 1.0}, 0.0);
    for (int i = 1; i <= 200; ++i) {
      const double value = ml_scalar({alpha, 1.0}, -0.05 * i);
      CAPTURE(alpha);
      CAPTURE(i);
      CHECK(value <= previous);
      CHECK(value > 0.0);
      previous = value;
    }
  }
}

TEST_CASE("SystemMatrix classification") {
  const SystemMatrix sym(example2_matrix());
  CHECK(sym.is_symmetric());
  CHECK_FALSE(sym.is_diagonal());
  CHECK(sym.has_eigen_data());
  CHECK(sym.spectral_radius() == doctest::Approx(2.0));

  Eigen::MatrixXd jordan(2, 2);
  jordan << -1.0, 1.0, 0.0, -1.0;
  const SystemMatrix defective(jordan);
  CHECK_FALSE(defective.has_eigen_data());

  Eigen::MatrixXd rotation(2, 2);
  rotation << 0.0, -1.0, 1.0, 0.0;
  CHECK_FALSE(SystemMatrix(rotation).has_eigen_data());

  CHECK_THROWS_AS(SystemMatrix(Eigen::MatrixXd(2, 3)), std::invalid_argument);
}

TEST_CASE("ml_matrix examples") {
  const SystemMatrix a(example2_matrix());
  CHECK(ml_matrix({0.5, 1.0}, 0.0, a).isApprox(Eigen::MatrixXd::Identity(2, 2), 1e-15));

  SUBCASE("diagonal short-circuit") {
    const SystemMatrix d(Eigen::Vector2d(-1.0, -2.0).asDiagonal().toDenseMatrix());
    CHECK(d.is_diagonal());
    const Eigen::MatrixXd e = ml_matrix({0.5, 1.0}, 0.7, d);
    CHECK(e(0, 0) == ml_scalar({0.5, 1.0}, -0.7));
    CHECK(e(1, 1) == ml_scalar({0.5, 1.0}, -1.4));
    CHECK(e(0, 1) == 0.0);
    CHECK(e(1, 0) == 0.0);
  }

  SUBCASE("eigen route equals series route") {
    const Eigen::MatrixXd eig = ml_matrix_eigen({0.5, 1.0}, 1.0, a);
    const Eigen::MatrixXd ser = ml_matrix_series({0.5, 1.0}, 1.0, a);
    CHECK((eig - ser).cwiseAbs().maxCoeff() <= 1e-10);
  }

  SUBCASE("defective matrix uses the series fallback") {
    Eigen::MatrixXd jordan(2, 2);
    jordan << -1.0, 1.0, 0.0, -1.0;
    const SystemMatrix j(jordan);
    const Eigen::MatrixXd e = ml_matrix({1.0, 1.0}, 0.5, j);
    // exp(0.5 J) = e^{-0.5} [[1, 0.5], [0, 1]]
    CHECK(e(0, 0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    CHECK(e(0, 1) == doctest::Approx(0.5 * std::exp(-0.5)).epsilon(1e-14));
    CHECK(std::abs(e(1, 0)) <= 1e-16);
    CHECK_THROWS_AS(ml_matrix({1.0, 1.0}, 10.0, j), std::domain_error);
    CHECK_THROWS_AS(ml_matrix_eigen({1.0, 1.0}, 0.5, j), NumericalError);
  }
}

TEST_CASE("route agreement on random symmetric matrices") {
  Rng rng(2024);
  for (int i = 0; i < 20; ++i) {
    const int m = rng.integer(2, 3);
    const SystemMatrix a(random_symmetric(rng, m, 2.0));
    const double alpha = rng.uniform(0.6, 1.0);
    const double z = rng.uniform(0.0, 1.0);
    const Eigen::MatrixXd eig = ml_matrix_eigen({alpha, 1.0}, z, a);
    const Eigen::MatrixXd ser = ml_matrix_series({alpha, 1.0}, z, a);
    CAPTURE(i);
    CHECK((eig - ser).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("Example 2 decomposition over eigenvectors (1,1) and (1,-1)") {
  FractionalProblem problem;
  problem.a = example2_matrix();
  problem.x0 = Eigen::Vector2d(1.0, 2.0);
  for (double g : {0.1, 0.25, 0.5, 0.75}) {
    problem.gamma = FractionalOrder(g);
    const SystemMatrix a(problem.a);
    for (double t = 0.0; t <= 1.0; t += 0.0625) {
      const Eigen::VectorXd x = reference_solution(problem, a, t);
      const double e1 = ml_scalar({g, 1.0}, -std::pow(t, g));
      const double e2 = ml_scalar({g, 1.0}, -2.0 * std::pow(t, g));
      CAPTURE(g);
      CAPTURE(t);
      CHECK(std::abs(x[0] - (1.5 * e1 - 0.5 * e2)) <= 1e-10);
      CHECK(std::abs(x[1] - (1.5 * e1 + 0.5 * e2)) <= 1e-10);
    }
  }
}

TEST_CASE("reference_solution examples") {
  FractionalProblem problem;
  problem.a = example2_matrix();
  problem.x0 = Eigen::Vector2d(1.0, 2.0);
  const Eigen::VectorXd at_zero = reference_solution(problem, 0.0);
  CHECK(at_zero[0] == 1.0);
  CHECK(at_zero[1] == 2.0);

  const Eigen::VectorXd at_one = reference_solution(problem, 1.0);
  const double e1 = 0.42758357615580700441;
  const double e2 = 0.25539567631050574387;
  CHECK(at_one[0] == doctest::Approx(1.5 * e1 - 0.5 * e2).epsilon(1e-12));
  CHECK(at_one[1] == doctest::Approx(1.5 * e1 + 0.5 * e2).epsilon(1e-12));

  problem.x0 = Eigen::Vector2d::Zero();
  CHECK(reference_solution(problem, 0.6).isZero(0.0));

  SUBCASE("refusals") {
    problem.forcing = {{{ForcingTerm::Kind::poly, 2.0, 1.0}}, {}};
    CHECK_THROWS_AS(reference_solution(problem, 0.5), std::invalid_argument);
    problem.forcing.clear();
    CHECK_THROWS_AS(reference_solution(problem, -0.1), std::invalid_argument);
  }
}
