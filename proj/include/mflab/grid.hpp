#pragma once

#include <Eigen/Dense>

#include "mflab/errors.hpp"

namespace mflab {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Truncated upper half-plane [-Lx, Lx] x [0, Ly], uniform nodes including
// the boundaries. The slip line Gamma = {y = 0} is always row j = 0.
struct HalfPlaneGrid {
  double Lx = 0.0;
  double Ly = 0.0;
  int nx = 0;
  int ny = 0;
  double dx = 0.0;
  double dy = 0.0;

  HalfPlaneGrid() = default;
  HalfPlaneGrid(double Lx, double Ly, int nx, int ny);

  double x(int i) const { return -Lx + i * dx; }
  double y(int j) const { return j * dy; }

  bool operator==(const HalfPlaneGrid& o) const {
    return Lx == o.Lx && Ly == o.Ly && nx == o.nx && ny == o.ny;
  }
  bool operator!=(const HalfPlaneGrid& o) const { return !(*this == o); }

  // Desk-scale default: Lx=100, Ly=50, dx=dy=0.25.
  static HalfPlaneGrid desk_default() {
    return HalfPlaneGrid(100.0, 50.0, 801, 201);
  }
};

// Scalar field u(x_i, y_j) on a HalfPlaneGrid. Value semantics; storage is
// column-major with x contiguous within each y-level.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const HalfPlaneGrid& g, double fill = 0.0)
      : grid_(g), v_(MatrixXd::Constant(g.nx, g.ny, fill)) {}

  double operator()(int i, int j) const { return v_(i, j); }
  double& operator()(int i, int j) { return v_(i, j); }
  const MatrixXd& values() const { return v_; }
  MatrixXd& values() { return v_; }
  const HalfPlaneGrid& grid() const { return grid_; }

  template <typename F>
  static ScalarField from_function(const HalfPlaneGrid& g, F&& f) {
    ScalarField out(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) out(i, j) = f(g.x(i), g.y(j));
    return out;
  }

 private:
  HalfPlaneGrid grid_;
  MatrixXd v_;
};

// Boundary trace u(x, 0) on the grid's x-nodes.
struct BoundaryTrace {
  HalfPlaneGrid grid;
  VectorXd values;

  BoundaryTrace() = default;
  BoundaryTrace(const HalfPlaneGrid& g, VectorXd v);

  template <typename F>
  static BoundaryTrace from_function(const HalfPlaneGrid& g, F&& f) {
    VectorXd v(g.nx);
    for (int i = 0; i < g.nx; ++i) v[i] = f(g.x(i));
    return BoundaryTrace(g, std::move(v));
  }
};

BoundaryTrace trace(const ScalarField& f);

double sup_norm(const ScalarField& f);
double sup_norm(const BoundaryTrace& t);
// Trapezoid integral of |t| with weight dx.
double l1_trace_norm(const BoundaryTrace& t);
// Sup-norm of f - g; the fields must share a grid.
double sup_diff(const ScalarField& f, const ScalarField& g);

bool all_finite(const ScalarField& f);

}  // namespace mflab
