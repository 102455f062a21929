#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "mflab/dynamics.hpp"

namespace mflab {

struct DecayFit {
  double exponent = 0.0;
  double amplitude = 0.0;
  std::pair<double, double> window{0.0, 0.0};
  double residual_rms = 0.0;
};

// Least squares on (log t, log norm) inside the window. Requires at least
// 8 samples in the window and positive norms there.
DecayFit fit_decay(const Eigen::Ref<const VectorXd>& times,
                   const Eigen::Ref<const VectorXd>& norms,
                   std::pair<double, double> window);

// Branch analysis of the boundary symbol denominator
//   lambda + mu + sqrt(lambda + eta^2)
// on the cut plane. The real root lambda* = r* - eta^2 exists iff
// eta^2 >= mu, with r* solving r + sqrt(r) = eta^2 - mu.
struct BranchData {
  double eta = 0.0;
  double mu = 0.0;
  std::optional<double> r_star;
  std::optional<double> spectral_abscissa;  // r* - eta^2 = -sqrt(r*) - mu
};
BranchData branch_root(double eta, double mu);

// 1 / (lambda + mu + sqrt(lambda + eta^2)), principal branch; inputs on
// the branch cut (-inf, -eta^2] are rejected with BranchError.
std::complex<double> boundary_symbol(std::complex<double> lambda, double eta,
                                     double mu);

// Heat semigroup with Dirichlet trace zero: convolution of the odd-in-y
// extension of bulk-only data with the 2D Gaussian kernel, evaluated by
// separable quadrature. Requires t > 0 and a zero boundary row.
ScalarField q2_solution(const ScalarField& q0_bulk, double t);
// d/dy of that solution at y = 0 (analytic kernel derivative).
BoundaryTrace q2_dy_trace(const ScalarField& q0_bulk, double t);

// Numerical inversion of the boundary kernel
//   K(t, x) = (1/(2 pi i)) (1/(2 pi)) int int e^{lambda t + i x eta}
//             / (lambda + mu + sqrt(lambda + eta^2))  d eta  d lambda
// via a truncated eta grid (eta_max * sqrt(t) >= 12) and, per eta, a
// shifted fixed-Talbot contour kept strictly right of the singularities
// located by branch_root.
double inverse_kernel(double t, double x, double mu);
VectorXd inverse_kernel_row(double t, const Eigen::Ref<const VectorXd>& xs,
                            double mu, int n_eta = 4096, int n_contour = 48);
// Boundary trace of the linearized solution for boundary-only initial
// data: x-convolution of the kernel row with the trace.
BoundaryTrace linear_trace_via_kernel(const BoundaryTrace& q0s, double t,
                                      double mu);
// Laplace inversion of the symbol at fixed eta (exposed for tests and for
// contour-placement overrides; sigma0 = NaN selects the automatic shift).
double kernel_eta_inverse(double t, double eta, double mu, int n_contour = 48,
                          double sigma0 = std::nan(""));

enum class DecayObservable { TraceSup, TraceDySup };

struct DecayExperimentResult {
  DecayFit fit;
  VectorXd times;
  VectorXd norms;
};

// Evolves the linearized system from q0 to time T, recording the chosen
// boundary observable, and fits the decay exponent on [T/10, T].
DecayExperimentResult linear_decay_experiment(
    const ScalarField& q0, double mu, const SchemeConfig& cfg, double T,
    DecayObservable obs = DecayObservable::TraceSup,
    double record_every = 0.5);

struct EnvelopeParams {
  double xi1 = 0.0;
  double xi2 = 0.0;
  double M = 0.0;
  double C = 1.0;
};

struct EnvelopeTimeRecord {
  double t = 0.0;
  double upper_violation = 0.0;  // interior max of (u - upper)+
  double lower_violation = 0.0;  // interior max of (lower - u)+
  double edge_violation = 0.0;   // worst violation inside the edge collar
  int worst_i = 0;
  int worst_j = 0;
};

struct EnvelopeReport {
  EnvelopeParams params;
  double max_upper_violation = 0.0;
  double max_lower_violation = 0.0;
  double edge_violation = 0.0;
  std::vector<EnvelopeTimeRecord> records;
};

// Checks the two-sided trapping envelope
//   phi(x - xi1 - 2M t^{-1/2}, y) - q0/(1 + C t^{3/2})
//     <= u(t) <=
//   phi(x + xi2 + 2M t^{-1/2}, y) + q0/(1 + C t^{3/2})
// against every recorded snapshot with t >= t_min. Interior and edge-collar
// (4 nodes at the artificial boundaries) violations are reported
// separately. M = 0 is allowed (negative control); M < 0 or C <= 0 is a
// ParameterError.
EnvelopeReport envelope_check(const Trajectory& traj,
                              const SteadyProfile& prof,
                              const ScalarField& q0,
                              const EnvelopeParams& params,
                              double t_min = 1.0);

}  // namespace mflab
