#include <doctest.h>

#include <random>

#include "mflab/math.hpp"

using namespace mflab;

TEST_SUITE_BEGIN("math");

TEST_CASE("sinpi/cospi are exact at the lattice points") {
  CHECK(sinpi(0.0) == 0.0);
  CHECK(sinpi(1.0) == 0.0);
  CHECK(sinpi(-1.0) == 0.0);
  CHECK(sinpi(2.0) == 0.0);
  CHECK(sinpi(17.0) == 0.0);
  CHECK(sinpi(0.5) == 1.0);
  CHECK(sinpi(-0.5) == -1.0);
  CHECK(sinpi(2.5) == 1.0);
  CHECK(cospi(0.0) == 1.0);
  CHECK(cospi(1.0) == -1.0);
  CHECK(cospi(0.5) == 0.0);
  CHECK(cospi(-1.0) == -1.0);
}

TEST_CASE("sinpi matches sin(pi x) and is exactly odd") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> d(-5.0, 5.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = d(rng);
    CHECK(sinpi(x) == doctest::Approx(std::sin(M_PI * x)).epsilon(1e-12));
    CHECK(sinpi(-x) == -sinpi(x));
  }
}

TEST_CASE("tridiagonal solver agrees with a dense solve") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const int n = 40;
  VectorXd lower(n), diag(n), upper(n), rhs(n);
  for (int i = 0; i < n; ++i) {
    lower[i] = d(rng);
    upper[i] = d(rng);
    diag[i] = 4.0 + d(rng);  // diagonally dominant
    rhs[i] = d(rng);
  }
  MatrixXd A = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    A(i, i) = diag[i];
    if (i > 0) A(i, i - 1) = lower[i];
    if (i + 1 < n) A(i, i + 1) = upper[i];
  }
  const VectorXd dense = A.fullPivLu().solve(rhs);
  VectorXd diag2 = diag, sol = rhs;
  solve_tridiagonal<double>(lower, diag2, upper, sol);
  CHECK((sol - dense).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("clamped cubic spline reproduces a cubic exactly") {
  auto p = [](double u) { return u * u * u - 2.0 * u * u + 0.5 * u + 1.0; };
  auto dp = [](double u) { return 3.0 * u * u - 4.0 * u + 0.5; };
  auto d2p = [](double u) { return 6.0 * u - 4.0; };
  const int n = 33;
  VectorXd x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = -2.0 + 4.0 * i / (n - 1);
    y[i] = p(x[i]);
  }
  CubicSpline s(x, y, dp(-2.0), dp(2.0));
  for (double u = -2.0; u <= 2.0; u += 0.037) {
    CHECK(s.value(u) == doctest::Approx(p(u)).epsilon(1e-12));
    CHECK(s.deriv(u) == doctest::Approx(dp(u)).epsilon(1e-10));
    CHECK(s.deriv2(u) == doctest::Approx(d2p(u)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(s.value(2.5), RangeError);
  CHECK_THROWS_AS(s.value(-2.5), RangeError);
}

TEST_CASE("fit_line recovers an exact line") {
  VectorXd x(5), y(5);
  for (int i = 0; i < 5; ++i) {
    x[i] = i;
    y[i] = 2.5 * i - 1.25;
  }
  const LineFit f = fit_line(x, y);
  CHECK(f.slope == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(f.intercept == doctest::Approx(-1.25).epsilon(1e-13));
  CHECK(f.residual_rms < 1e-13);
}

TEST_CASE("interp_uniform reproduces nodes and interior quadratics") {
  VectorXd v(9);
  for (int i = 0; i < 9; ++i) v[i] = 0.25 * i * i - i + 2.0;
  for (int i = 0; i < 9; ++i) CHECK(interp_uniform(v, double(i)) == v[i]);
  for (double t = 1.1; t < 7.0; t += 0.217) {
    const double want = 0.25 * t * t - t + 2.0;
    CHECK(interp_uniform(v, t) == doctest::Approx(want).epsilon(1e-12));
  }
  // constant extension outside
  CHECK(interp_uniform(v, -3.0) == v[0]);
  CHECK(interp_uniform(v, 20.0) == v[8]);
}

TEST_CASE("golden section finds a quadratic minimum") {
  const double m =
      golden_section_minimize([](double x) { return (x - 1.3) * (x - 1.3); },
                              -4.0, 4.0, 1e-8);
  CHECK(m == doctest::Approx(1.3).epsilon(1e-6));
  CHECK_THROWS_AS(golden_section_minimize([](double x) { return x; }, 1.0,
                                          -1.0, 1e-8),
                  SearchError);
}

TEST_SUITE_END();
