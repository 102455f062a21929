#include <doctest.h>

#include <cmath>

#include "mflab/steady.hpp"

using namespace mflab;

TEST_SUITE_BEGIN("steady");

namespace {
// Unit-test grid: same spacing as the desk default, smaller extents.
HalfPlaneGrid test_grid() { return HalfPlaneGrid(50.0, 25.0, 401, 101); }

BoundaryTrace arctan_trace(const HalfPlaneGrid& g) {
  return BoundaryTrace::from_function(
      g, [](double x) { return (2.0 / M_PI) * std::atan(x); });
}
}  // namespace

TEST_CASE("closed-form profile values") {
  CHECK(closed_form_phi(0.0, 0.0).phi == 0.0);
  CHECK(closed_form_phi(1.0, 0.0).phi == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(closed_form_phi(0.0, 0.0).dphi_dx == 2.0 / M_PI);
  // derivative formulas at a generic point
  const double x = 1.7, y = 0.9;
  const auto t = closed_form_phi(x, y);
  const double d = (y + 1.0) * (y + 1.0) + x * x;
  CHECK(t.dphi_dx == doctest::Approx((2.0 / M_PI) * (y + 1.0) / d));
  CHECK(t.dphi_dy == doctest::Approx(-(2.0 / M_PI) * x / d));
  // odd symmetry in x
  CHECK(closed_form_phi(-x, y).phi == doctest::Approx(-t.phi).epsilon(1e-15));
}

TEST_CASE("half-Laplacian quadrature on the arctan transition") {
  const HalfPlaneGrid g = test_grid();
  const BoundaryTrace ref = arctan_trace(g);
  const BoundaryTrace h = half_laplacian_quadrature(ref);
  // oracle: closed form -d/dy of the harmonic extension at y=0
  double sup = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    const double x = g.x(i);
    if (std::abs(x) > g.Lx / 2) continue;
    sup = std::max(sup,
                   std::abs(h.values[i] - (2.0 / M_PI) * x / (1.0 + x * x)));
  }
  CHECK(sup < 5e-3);
}

TEST_CASE("half-Laplacian combined operator") {
  const HalfPlaneGrid g = test_grid();
  const BoundaryTrace ref = arctan_trace(g);

  // t = reference: spectral part vanishes
  const BoundaryTrace same = half_laplacian(ref, ref);
  double sup = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    const double x = g.x(i);
    if (std::abs(x) > g.Lx / 2) continue;
    sup = std::max(sup,
                   std::abs(same.values[i] - (2.0 / M_PI) * x / (1.0 + x * x)));
  }
  CHECK(sup < 5e-3);

  // constants are annihilated
  const BoundaryTrace one(g, VectorXd::Constant(g.nx, 1.0));
  const BoundaryTrace z = half_laplacian(one, one);
  CHECK(z.values.cwiseAbs().maxCoeff() < 1e-12);

  // a grid-periodic cosine mode picks up the multiplier |eta|
  const double eta = M_PI * 5 / g.Lx;
  BoundaryTrace mode = ref;
  for (int i = 0; i < g.nx; ++i) mode.values[i] += std::cos(eta * g.x(i));
  const BoundaryTrace out = half_laplacian(mode, ref);
  const BoundaryTrace base = half_laplacian_quadrature(ref);
  double mode_err = 0.0;
  for (int i = 0; i < g.nx; ++i)
    mode_err = std::max(mode_err,
                        std::abs(out.values[i] - base.values[i] -
                                 eta * std::cos(eta * g.x(i))));
  CHECK(mode_err < 1e-10);

  // mismatched ends are rejected
  BoundaryTrace ramp = ref;
  for (int i = 0; i < g.nx; ++i)
    ramp.values[i] += 0.5 * (g.x(i) + g.Lx) / (2.0 * g.Lx);
  CHECK_THROWS_AS(half_laplacian(ramp, ref), TailError);
}

TEST_CASE("harmonic extension against the closed form") {
  const HalfPlaneGrid g = test_grid();
  const ScalarField ext = harmonic_extension(arctan_trace(g), g);
  const ScalarField exact = closed_form_phi_field(g);
  // interior quarter: |x| <= Lx/2, Ly/4 <= y <= 3Ly/4
  double sup = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    const double y = g.y(j);
    if (y < g.Ly / 4 || y > 3 * g.Ly / 4) continue;
    for (int i = 0; i < g.nx; ++i) {
      if (std::abs(g.x(i)) > g.Lx / 2) continue;
      sup = std::max(sup, std::abs(ext(i, j) - exact(i, j)));
    }
  }
  CHECK(sup < 1e-3);
}

TEST_CASE("harmonic extension: constants and odd symmetry") {
  const HalfPlaneGrid g(10.0, 5.0, 81, 41);
  const BoundaryTrace one(g, VectorXd::Constant(g.nx, 1.0));
  const ScalarField cext = harmonic_extension(one, g);
  // the near-boundary rows integrate the interpolant exactly, so a
  // constant trace extends to machine precision there
  double sup_low = 0.0;
  for (int j = 1; j <= 8; ++j)
    for (int i = 0; i < g.nx; ++i)
      sup_low = std::max(sup_low, std::abs(cext(i, j) - 1.0));
  CHECK(sup_low < 1e-12);
  double sup_above = 0.0;
  for (int j = 9; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      sup_above = std::max(sup_above, std::abs(cext(i, j) - 1.0));
  CHECK(sup_above < 1e-3);

  const BoundaryTrace odd = BoundaryTrace::from_function(
      g, [](double x) { return std::tanh(0.8 * x); });
  const ScalarField oext = harmonic_extension(odd, g);
  double asym = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      asym = std::max(asym, std::abs(oext(i, j) + oext(g.nx - 1 - i, j)));
  CHECK(asym < 1e-13);
}

TEST_CASE("solve_profile: cosine potential matches the closed form") {
  const HalfPlaneGrid g = test_grid();
  const auto pot = DoubleWellPotential::cosine();
  const SteadyProfile prof = solve_profile(pot, g, 1e-2);
  const BoundaryTrace tr = trace(prof.field);
  double sup = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    const double x = g.x(i);
    if (std::abs(x) > g.Lx / 2) continue;
    sup = std::max(sup,
                   std::abs(tr.values[i] - (2.0 / M_PI) * std::atan(x)));
  }
  CHECK(sup < 1e-2);

  // self-consistency: discrete residuals below 10 * tol
  CHECK(prof.residual.first < 10.0 * prof.tol);
  CHECK(prof.residual.second < 10.0 * prof.tol);
  // monotone trace
  CHECK(prof.dx_trace.values.minCoeff() > 0.0);
  // odd symmetry of the trace for the odd W'
  double asym = 0.0;
  for (int i = 0; i < g.nx; ++i)
    asym = std::max(asym, std::abs(tr.values[i] + tr.values[g.nx - 1 - i]));
  CHECK(asym < 1e-2);
  // trace strictly inside (-1, 1)
  CHECK(sup_norm(tr) < 1.0);
}

TEST_CASE("solve_profile: uniqueness up to translation") {
  const HalfPlaneGrid g(25.0, 12.5, 201, 51);
  const auto pot = DoubleWellPotential::cosine();
  const double tol = 1e-2;
  const SteadyProfile a = solve_profile(pot, g, tol, 100000, 0.0);
  const SteadyProfile b = solve_profile(pot, g, tol, 100000, 2.0);
  const double diff =
      (trace(a.field).values - trace(b.field).values).cwiseAbs().maxCoeff();
  CHECK(diff < 2.0 * tol);
}

TEST_CASE("solve_profile: quartic well gives a monotone transition") {
  const HalfPlaneGrid g(25.0, 12.5, 201, 51);
  const int n = 641;
  VectorXd u(n), w(n);
  for (int i = 0; i < n; ++i) {
    u[i] = -1.6 + 3.2 * i / (n - 1);
    const double s = u[i] * u[i] - 1.0;
    w[i] = 0.25 * s * s;
  }
  const auto pot = DoubleWellPotential::tabulated(u, w);
  const SteadyProfile prof = solve_profile(pot, g, 1e-2);
  CHECK(prof.dx_trace.values.minCoeff() > 0.0);
  CHECK(sup_norm(trace(prof.field)) < 1.0);
  CHECK(prof.beta > 0.0);
  // trace zero at x = 0 (recentring gauge)
  CHECK(std::abs(trace(prof.field).values[(g.nx - 1) / 2]) < 1e-3);
}

TEST_CASE("solve_profile: refinement improves the closed-form match") {
  const auto pot = DoubleWellPotential::cosine();
  auto discrepancy = [&](int nx, int ny) {
    const HalfPlaneGrid g(25.0, 12.5, nx, ny);
    // converge well below the discretization floor; the off-node initial
    // shift makes the solve (and the recentring) do real work
    const SteadyProfile prof = solve_profile(pot, g, 1e-5, 100000, 1.3);
    double sup = 0.0;
    const BoundaryTrace tr = trace(prof.field);
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.x(i);
      if (std::abs(x) > g.Lx / 2) continue;
      sup = std::max(sup,
                     std::abs(tr.values[i] - (2.0 / M_PI) * std::atan(x)));
    }
    return sup;
  };
  const double coarse = discrepancy(101, 26);  // h = 0.5
  const double fine = discrepancy(201, 51);    // h = 0.25
  CHECK(fine <= 0.55 * coarse);
}

TEST_CASE("solve_profile rejects bad tolerance") {
  CHECK_THROWS_AS(
      solve_profile(DoubleWellPotential::cosine(), test_grid(), 0.0),
      ParameterError);
}

TEST_CASE("tail_fit") {
  const HalfPlaneGrid g(50.0, 25.0, 401, 101);

  // exact power law 1 - 3/x: c = 3, exponent = -1
  BoundaryTrace synth = BoundaryTrace::from_function(
      g, [](double x) { return 1.0 - 3.0 / std::max(x, 1.0); });
  const TailFit exact = tail_fit(synth);
  CHECK(exact.c == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(exact.exponent == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(exact.residual_rms < 1e-12);

  // closed-form profile: exponent -1 +- 0.05, c near 2/pi
  const HalfPlaneGrid big = HalfPlaneGrid::desk_default();
  const TailFit cf = tail_fit(BoundaryTrace::from_function(
      big, [](double x) { return (2.0 / M_PI) * std::atan(x); }));
  CHECK(cf.exponent == doctest::Approx(-1.0).epsilon(0.05));
  CHECK(cf.c == doctest::Approx(2.0 / M_PI).epsilon(0.10));

  // exponential saturation is flagged by a much steeper fitted slope
  BoundaryTrace sat = BoundaryTrace::from_function(
      g, [](double x) { return 1.0 - std::exp(-std::max(x, 0.0) / 5.0); });
  CHECK(tail_fit(sat).exponent < -2.0);

  // non-positive 1 - phi inside the window
  BoundaryTrace above = BoundaryTrace::from_function(
      g, [](double) { return 1.5; });
  CHECK_THROWS_AS(tail_fit(above), FitError);
}

TEST_CASE("gradient_bound_check against the maximized closed form") {
  // oracle: maximize (2/pi)(1+sqrt(x^2+y^2))/sqrt(x^2+(y+1)^2) by scan
  double oracle = 0.0;
  for (double y = 0.0; y <= 2.0; y += 0.001)
    for (double x = 0.0; x <= 3.0; x += 0.001) {
      const double v = (2.0 / M_PI) * (1.0 + std::hypot(x, y)) /
                       std::hypot(x, y + 1.0);
      oracle = std::max(oracle, v);
    }
  // analytic maximum is 2*sqrt(2)/pi at (1, 0)
  CHECK(oracle == doctest::Approx(2.0 * std::sqrt(2.0) / M_PI).epsilon(1e-5));

  const HalfPlaneGrid g(25.0, 12.5, 201, 51);
  const SteadyProfile prof = closed_form_profile(g);
  const double measured = gradient_bound_check(prof);
  CHECK(measured == doctest::Approx(oracle).epsilon(0.02));

  // constant field: zero gradient up to stencil roundoff
  SteadyProfile flat;
  flat.field = ScalarField(g, 0.7);
  CHECK(gradient_bound_check(flat) < 1e-12);
}

TEST_CASE("beta_constant") {
  const HalfPlaneGrid g(25.0, 12.5, 201, 51);
  const SteadyProfile prof = closed_form_profile(g);
  // band edge x_delta = tan(pi(1-delta)/2) = 1 at delta = 1/2, and the
  // band minimum of dx_trace sits there: beta = (2/pi)/(1+1) = 1/pi
  CHECK(beta_constant(prof, 0.5) == doctest::Approx(1.0 / M_PI).epsilon(1e-9));
  // delta -> 1: the band shrinks to {0} where dx_trace = 2/pi
  CHECK(beta_constant(prof, 0.999) ==
        doctest::Approx(2.0 / M_PI).epsilon(1e-12));

  SteadyProfile off;
  off.field = ScalarField(g, 0.99);
  off.dx_trace = BoundaryTrace(g, VectorXd::Constant(g.nx, 1.0));
  CHECK_THROWS_AS(beta_constant(off, 0.5), BandError);
}

TEST_CASE("shift_in_x matches the shifted closed form") {
  const HalfPlaneGrid g(25.0, 12.5, 201, 51);
  const ScalarField phi = closed_form_phi_field(g);
  const double s = 2.5;
  const ScalarField shifted = shift_in_x(phi, s);
  double sup = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 12; i < g.nx - 12; ++i)
      sup = std::max(sup,
                     std::abs(shifted(i, j) -
                              closed_form_phi(g.x(i) - s, g.y(j)).phi));
  CHECK(sup < 1e-3);
}

TEST_SUITE_END();
