#include "mflab/grid.hpp"

#include <cmath>

namespace mflab {

HalfPlaneGrid::HalfPlaneGrid(double Lx_, double Ly_, int nx_, int ny_)
    : Lx(Lx_), Ly(Ly_), nx(nx_), ny(ny_) {
  if (!(Lx > 0.0) || !(Ly > 0.0))
    throw DimensionError("HalfPlaneGrid: Lx, Ly must be positive");
  if (nx < 3 || ny < 3)
    throw DimensionError("HalfPlaneGrid: need nx, ny >= 3");
  dx = 2.0 * Lx / (nx - 1);
  dy = Ly / (ny - 1);
}

BoundaryTrace::BoundaryTrace(const HalfPlaneGrid& g, VectorXd v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.nx)
    throw DimensionError("BoundaryTrace: value count != nx");
}

BoundaryTrace trace(const ScalarField& f) {
  return BoundaryTrace(f.grid(), f.values().col(0));
}

double sup_norm(const ScalarField& f) {
  return f.values().array().abs().maxCoeff();
}

double sup_norm(const BoundaryTrace& t) {
  return t.values.array().abs().maxCoeff();
}

double l1_trace_norm(const BoundaryTrace& t) {
  const int n = t.grid.nx;
  double s = 0.5 * (std::abs(t.values[0]) + std::abs(t.values[n - 1]));
  for (int i = 1; i < n - 1; ++i) s += std::abs(t.values[i]);
  return s * t.grid.dx;
}

double sup_diff(const ScalarField& f, const ScalarField& g) {
  if (f.grid() != g.grid())
    throw DimensionError("sup_diff: fields live on different grids");
  return (f.values() - g.values()).array().abs().maxCoeff();
}

bool all_finite(const ScalarField& f) {
  return f.values().array().isFinite().all();
}

}  // namespace mflab
