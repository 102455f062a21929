#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "mflab/potential.hpp"

using namespace mflab;

TEST_SUITE_BEGIN("potential");

TEST_CASE("cosine potential: frozen values") {
  const auto p = DoubleWellPotential::cosine();
  // wells exactly at zero energy
  CHECK(p.w(1.0) == 0.0);
  CHECK(p.w(-1.0) == 0.0);
  CHECK(p.w(0.0) == doctest::Approx(2.0 / (M_PI * M_PI)).epsilon(1e-15));
  // symbolic differentiation: W'(u) = -(1/pi) sin(pi u)
  CHECK(p.w_prime(0.5) == doctest::Approx(-1.0 / M_PI).epsilon(1e-15));
  CHECK(p.w_prime(1.0) == 0.0);
  CHECK(p.w_prime(-1.0) == 0.0);
  CHECK(p.w_prime(0.0) == 0.0);
  // W''(u) = -cos(pi u)
  CHECK(p.w_double_prime(1.0) == 1.0);
  CHECK(p.w_double_prime(-1.0) == 1.0);
  CHECK(p.w_double_prime(0.0) == -1.0);
  p.validate();
}

TEST_CASE("cosine potential: W' is exactly odd and FD-consistent") {
  const auto p = DoubleWellPotential::cosine();
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(-1.5, 1.5);
  const double h = 1e-5;
  for (int i = 0; i < 500; ++i) {
    const double u = d(rng);
    CHECK(p.w_prime(-u) == -p.w_prime(u));
    const double fd = (p.w(u + h) - p.w(u - h)) / (2.0 * h);
    CHECK(p.w_prime(u) == doctest::Approx(fd).epsilon(1e-6));
  }
}

namespace {

DoubleWellPotential quartic_tabulated(double half_range = 1.6, int n = 641) {
  VectorXd u(n), w(n);
  for (int i = 0; i < n; ++i) {
    u[i] = -half_range + 2.0 * half_range * i / (n - 1);
    const double s = u[i] * u[i] - 1.0;
    w[i] = 0.25 * s * s;
  }
  return DoubleWellPotential::tabulated(u, w);
}

}  // namespace

TEST_CASE("tabulated quartic well tracks the analytic derivatives") {
  const auto p = quartic_tabulated();
  for (double u = -1.55; u <= 1.55; u += 0.043) {
    const double s = u * u - 1.0;
    CHECK(p.w(u) == doctest::Approx(0.25 * s * s).epsilon(1e-8));
    CHECK(p.w_prime(u) == doctest::Approx(u * s).epsilon(1e-5));
    CHECK(p.w_double_prime(u) ==
          doctest::Approx(3.0 * u * u - 1.0).epsilon(2e-3));
  }
  p.validate();
  CHECK_THROWS_AS(p.w(1.7), RangeError);
}

TEST_CASE("CSV loading") {
  const std::string path = "potential_test.csv";
  {
    std::ofstream f(path);
    f << "u,W\n";
    const int n = 321;
    for (int i = 0; i < n; ++i) {
      const double u = -1.6 + 3.2 * i / (n - 1);
      const double s = u * u - 1.0;
      f.precision(17);
      f << u << "," << 0.25 * s * s << "\n";
    }
  }
  const auto p = DoubleWellPotential::from_csv(path);
  CHECK(p.kind() == PotentialKind::UserTabulated);
  CHECK(p.w(0.0) == doctest::Approx(0.25).epsilon(1e-6));
  std::remove(path.c_str());

  CHECK_THROWS_AS(DoubleWellPotential::from_csv("no_such_file.csv"),
                  FormatError);
  {
    std::ofstream f(path);
    f << "u,W\n0.0,1.0\n0.0,1.0\n0.1,1.0\n0.2,1.0\n0.3,1.0\n";
  }
  CHECK_THROWS_AS(DoubleWellPotential::from_csv(path), FormatError);
  {
    std::ofstream f(path);
    f << "u,W\n0.0,abc\n";
  }
  CHECK_THROWS_AS(DoubleWellPotential::from_csv(path), FormatError);
  std::remove(path.c_str());
}

TEST_CASE("estimate_constants: cosine at delta=0.5 succeeds and re-verifies") {
  const auto p = DoubleWellPotential::cosine();
  const PotentialConstants c = estimate_constants(p, 0.5);
  CHECK(c.mu > 0.0);
  CHECK(c.k > 0.0);
  CHECK(c.delta == 0.5);
  // independent re-verification on a fresh fine grid
  const ConstantsCheck chk = verify_constants(p, c, 4000);
  CHECK(chk.worst_margin >= 0.0);
  // random probes inside the sampled closed regions
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> phid(0.5, 1.0);
  std::uniform_real_distribution<double> qd(0.5 / 400.0, 0.5);
  for (int i = 0; i < 20000; ++i) {
    const double phi = phid(rng);
    const double q = qd(rng);
    CHECK(p.w_prime(phi + q) - p.w_prime(phi) >= c.mu * q);
    CHECK(p.w_prime(-phi) - p.w_prime(-phi - q) >= c.mu * q);
  }
  // k bound on the transition band
  std::uniform_real_distribution<double> band(-0.5, 0.5);
  for (int i = 0; i < 20000; ++i) {
    const double phi = band(rng);
    const double q = qd(rng);
    CHECK(std::abs(p.w_prime(phi - q) - p.w_prime(phi)) <= c.k * q);
  }
}

TEST_CASE("estimate_constants: delta too large fails with a real witness") {
  const auto p = DoubleWellPotential::cosine();
  try {
    estimate_constants(p, 0.99);
    FAIL("expected ConstantsError");
  } catch (const ConstantsError& e) {
    // the reported pair must genuinely violate positivity of the quotient
    const double lhs_r = p.w_prime(e.phi + e.q) - p.w_prime(e.phi);
    const double lhs_l = p.w_prime(e.phi) - p.w_prime(e.phi - e.q);
    CHECK(std::min(lhs_r, lhs_l) <= 0.0);
  }
}

TEST_CASE("estimate_constants: quartic well") {
  const auto p = quartic_tabulated();
  // delta=0.5 reaches into the concave region (W''(0.5) = -1/4 < 0)
  CHECK_THROWS_AS(estimate_constants(p, 0.5), ConstantsError);
  // a smaller band stays inside the convexity basin; the mean-value bound
  // mu <= min W'' on [1-delta, 1] must hold (min = 3(1-delta)^2 - 1)
  const double delta = 0.35;
  const PotentialConstants c = estimate_constants(p, delta);
  const double min_w2 = 3.0 * (1.0 - delta) * (1.0 - delta) - 1.0;
  CHECK(c.mu > 0.0);
  CHECK(c.mu <= min_w2);
}

TEST_CASE("estimate_constants rejects bad delta") {
  const auto p = DoubleWellPotential::cosine();
  CHECK_THROWS_AS(estimate_constants(p, 0.0), ParameterError);
  CHECK_THROWS_AS(estimate_constants(p, 1.0), ParameterError);
}

TEST_SUITE_END();
