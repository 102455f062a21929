#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "mflab/snapshot.hpp"
#include "mflab/steady.hpp"

using namespace mflab;

TEST_SUITE_BEGIN("grid_field");

namespace {
HalfPlaneGrid small_grid() { return HalfPlaneGrid(10.0, 5.0, 81, 41); }

ScalarField random_field(const HalfPlaneGrid& g, std::mt19937& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  ScalarField f(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) f(i, j) = d(rng);
  return f;
}
}  // namespace

TEST_CASE("grid spacing is consistent with the extents") {
  const HalfPlaneGrid g = HalfPlaneGrid::desk_default();
  CHECK(g.dx == 2.0 * g.Lx / (g.nx - 1));
  CHECK(g.dy == g.Ly / (g.ny - 1));
  CHECK(g.dx == 0.25);
  CHECK(g.dy == 0.25);
  CHECK(g.x(0) == -g.Lx);
  CHECK(g.x(g.nx - 1) == g.Lx);
  CHECK(g.y(0) == 0.0);
  CHECK_THROWS_AS(HalfPlaneGrid(-1.0, 1.0, 11, 11), DimensionError);
  CHECK_THROWS_AS(HalfPlaneGrid(1.0, 1.0, 2, 11), DimensionError);
}

TEST_CASE("trace extraction") {
  const HalfPlaneGrid g = small_grid();
  const ScalarField ones(g, 1.0);
  CHECK(sup_norm(trace(ones)) == 1.0);
  CHECK(trace(ones).values.minCoeff() == 1.0);

  // the closed-form field restricted to y=0 is (2/pi) atan(x)
  const ScalarField phi = closed_form_phi_field(g);
  const BoundaryTrace tr = trace(phi);
  for (int i = 0; i < g.nx; ++i)
    CHECK(tr.values[i] ==
          doctest::Approx((2.0 / M_PI) * std::atan(g.x(i))).epsilon(1e-14));

  // odd field -> odd trace, exactly
  const ScalarField odd = ScalarField::from_function(
      g, [](double x, double y) { return x * (1.0 + y); });
  const BoundaryTrace otr = trace(odd);
  for (int i = 0; i < g.nx; ++i)
    CHECK(otr.values[i] == -otr.values[g.nx - 1 - i]);
}

TEST_CASE("norms") {
  const HalfPlaneGrid g = small_grid();
  const ScalarField zero(g, 0.0);
  CHECK(sup_norm(zero) == 0.0);
  CHECK(l1_trace_norm(trace(zero)) == 0.0);
  CHECK(sup_diff(zero, zero) == 0.0);

  // indicator-like hat of height 1 on |x| <= 1: the exact trapezoid sum is
  // dx * (#nodes inside) = 0.25 * 9 = 2.25, within dx of the integral 2.
  BoundaryTrace hat(g, VectorXd::Zero(g.nx));
  int inside = 0;
  for (int i = 0; i < g.nx; ++i)
    if (std::abs(g.x(i)) <= 1.0) {
      hat.values[i] = 1.0;
      ++inside;
    }
  CHECK(inside == 9);
  CHECK(l1_trace_norm(hat) == doctest::Approx(2.25).epsilon(1e-14));
  CHECK(std::abs(l1_trace_norm(hat) - 2.0) <= g.dx);

  const HalfPlaneGrid other(10.0, 5.0, 41, 21);
  CHECK_THROWS_AS(sup_diff(zero, ScalarField(other)), DimensionError);
}

TEST_CASE("sup_diff triangle inequality on random fields") {
  const HalfPlaneGrid g(5.0, 2.0, 21, 9);
  std::mt19937 rng(42);
  for (int trial = 0; trial < 25; ++trial) {
    const ScalarField a = random_field(g, rng);
    const ScalarField b = random_field(g, rng);
    const ScalarField c = random_field(g, rng);
    CHECK(sup_diff(a, c) <= sup_diff(a, b) + sup_diff(b, c) + 1e-15);
    CHECK(sup_diff(a, b) == sup_diff(b, a));
  }
}

TEST_CASE("snapshot round trip is bit exact") {
  const HalfPlaneGrid g = small_grid();
  std::mt19937 rng(5);
  const ScalarField f = random_field(g, rng);
  const std::string path = "snap_test.bin";
  write_snapshot(f, path, 12.75);
  const Snapshot s = read_snapshot(path);
  CHECK(s.time == 12.75);
  CHECK(s.field.grid() == g);
  CHECK((s.field.values().array() == f.values().array()).all());
  // read-trace consistency
  CHECK((trace(s.field).values.array() == trace(f).values.array()).all());
  std::remove(path.c_str());
}

TEST_CASE("snapshot error paths") {
  const HalfPlaneGrid g = small_grid();
  std::mt19937 rng(6);
  const ScalarField f = random_field(g, rng);
  const std::string path = "snap_err.bin";
  write_snapshot(f, path, 0.0);

  // truncated payload
  {
    std::ifstream in(path, std::ios::binary);
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
    bytes.resize(bytes.size() / 2);
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  CHECK_THROWS_AS(read_snapshot(path), FormatError);

  write_snapshot(f, path, 0.0);
  const HalfPlaneGrid other(10.0, 5.0, 41, 21);
  CHECK_THROWS_AS(read_snapshot(path, other), DimensionError);

  // bad magic
  {
    std::ofstream out(path, std::ios::binary);
    out << "NOPE this is not a snapshot";
  }
  CHECK_THROWS_AS(read_snapshot(path), FormatError);
  std::remove(path.c_str());
}

TEST_CASE("csv export shape") {
  const HalfPlaneGrid g(1.0, 1.0, 3, 3);
  ScalarField f(g, 0.0);
  f(1, 1) = 2.5;
  const std::string path = "field_test.csv";
  write_field_csv(f, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,y,value");
  int rows = 0;
  bool found = false;
  while (std::getline(in, line)) {
    ++rows;
    if (line == "0,0.5,2.5") found = true;
  }
  CHECK(rows == 9);
  CHECK(found);
  std::remove(path.c_str());
}

TEST_SUITE_END();
