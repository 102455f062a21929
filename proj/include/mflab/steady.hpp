#pragma once

#include <utility>
#include <vector>

#include "mflab/grid.hpp"
#include "mflab/potential.hpp"

namespace mflab {

// Closed-form metastable profile for the cosine potential:
//   phi(x, y) = (2/pi) atan(x / (y+1))
// together with its first derivatives.
struct ProfileTriple {
  double phi;
  double dphi_dx;
  double dphi_dy;
};
ProfileTriple closed_form_phi(double x, double y);
ScalarField closed_form_phi_field(const HalfPlaneGrid& g);

// Half-Laplacian (Fourier multiplier |eta|) of the decaying deviation
// t - reference, computed spectrally on the periodic extension, plus the
// singular-integral quadrature applied to the fixed reference transition.
// The deviation must match at the two domain ends (tail check), otherwise
// TailError.
BoundaryTrace half_laplacian(const BoundaryTrace& t,
                             const BoundaryTrace& reference);

// Building blocks, exposed for tests and for reuse by solve_profile:
// principal-value quadrature of (1/pi) PV int (g(x)-g(x'))/(x-x')^2 dx'
// with g extended beyond the domain by its end values,
BoundaryTrace half_laplacian_quadrature(const BoundaryTrace& g);
// and the |eta| multiplier acting on the periodic extension of v.
BoundaryTrace half_laplacian_periodic(const BoundaryTrace& v);

// Discrete Poisson-kernel extension of the trace to the half-plane, with
// the trace continued by its end values beyond [-Lx, Lx]. Row j=0 is the
// trace itself.
ScalarField harmonic_extension(const BoundaryTrace& t, const HalfPlaneGrid& g);

struct SteadyProfile {
  ScalarField field;
  BoundaryTrace dx_trace;      // d/dx of the trace, strictly positive
  double tail_constant = 0.0;  // c in phi ~ 1 - c/x
  double beta = 0.0;           // min of dx_trace over the delta=0.5 band
  // sup of the discrete bulk Laplacian residual and of the one-sided
  // boundary residual d/dy - W', measured outside a 4-node collar at the
  // artificial lateral/top edges.
  std::pair<double, double> residual{0.0, 0.0};
  double tol = 0.0;  // solver tolerance recorded at construction
};

// Damped pseudo-time iteration of the reduced boundary equation
//   dv/dtau = -(-Lap)^(1/2) v - W'(v)
// from the arctan initial guess (optionally shifted), followed by harmonic
// extension; the returned profile is recentred so its trace vanishes at
// x = 0. Throws ConvergenceError with the residual history on failure.
SteadyProfile solve_profile(const DoubleWellPotential& p,
                            const HalfPlaneGrid& g, double tol,
                            int max_iter = 100000, double initial_shift = 0.0);

// SteadyProfile assembled from the closed form (no solve); useful as the
// exact reference for the cosine potential.
SteadyProfile closed_form_profile(const HalfPlaneGrid& g);

struct TailFit {
  double c = 0.0;
  double exponent = 0.0;
  double residual_rms = 0.0;
};
// Least-squares fit of log(1 - phi(x,0)) against log(x) over the window
// x in [Lx/4, 3Lx/4]; exponent is expected near -1 for the fat tail.
TailFit tail_fit(const SteadyProfile& prof);
TailFit tail_fit(const BoundaryTrace& t);

// sup over the grid of |grad phi| (1 + sqrt(x^2+y^2)), finite-difference
// gradient; finiteness certifies the gradient decay bound with that
// constant.
double gradient_bound_check(const SteadyProfile& prof);

// min of dx_trace over the band {x : phi(x,0) in [-1+delta, 1-delta]};
// BandError when the band contains no grid node.
double beta_constant(const SteadyProfile& prof, double delta);

// phi(x - s, y) by per-row interpolation, constant extension at the ends.
ScalarField shift_in_x(const ScalarField& f, double s);
VectorXd shift_in_x(const Eigen::Ref<const VectorXd>& v, double s_nodes);

}  // namespace mflab
