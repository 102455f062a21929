#pragma once

#include <memory>
#include <vector>

#include "mflab/potential.hpp"
#include "mflab/steady.hpp"

namespace mflab {

enum class Scheme { ExplicitEuler, SemiImplicit };
enum class LateralBC { ClampToProfile, ClampToPlusMinusOne };
enum class TopBC { ClampToProfile, HomogeneousNeumann };

struct SchemeConfig {
  double dt = 0.01;
  Scheme scheme = Scheme::SemiImplicit;
  LateralBC bc_x = LateralBC::ClampToProfile;
  TopBC bc_top = TopBC::ClampToProfile;
};

// Explicit stability: dt <= min(dx^2, dy^2)/4 and dt <= 1/max|W''|.
// Throws ParameterError naming the violated constraint.
void validate_scheme(const SchemeConfig& cfg, const HalfPlaneGrid& g,
                     double max_abs_w2);

// One-step integrator for the coupled system
//   du/dt = Lap u              (y > 0)
//   du/dt = du/dy - W'(u)      (y = 0, second-order one-sided du/dy)
// with the boundary row advanced monolithically with the bulk (no
// bulk/interface splitting). SemiImplicit does direction-split backward
// Euler on the diffusion with W' kept explicit.
class Stepper {
 public:
  // profile_ref supplies the Dirichlet values for the ClampToProfile
  // modes; when null the closed-form cosine profile is used.
  Stepper(const DoubleWellPotential& p, const SchemeConfig& cfg,
          const HalfPlaneGrid& g, const ScalarField* profile_ref = nullptr);
  void advance(ScalarField& u);
  double dt() const { return cfg_.dt; }

 private:
  void advance_explicit(ScalarField& u);
  void advance_semi_implicit(ScalarField& u);

  DoubleWellPotential pot_;
  SchemeConfig cfg_;
  HalfPlaneGrid grid_;
  VectorXd clamp_left_, clamp_right_, clamp_top_;
  // workspace
  MatrixXd work_;
  VectorXd p_, q_, reaction_;
};

// Linearized variant: the boundary reaction is mu * q and all artificial
// boundaries clamp to zero.
class LinearStepper {
 public:
  LinearStepper(double mu, const SchemeConfig& cfg, const HalfPlaneGrid& g);
  void advance(ScalarField& q);
  double dt() const { return cfg_.dt; }

 private:
  double mu_;
  SchemeConfig cfg_;
  HalfPlaneGrid grid_;
  MatrixXd work_;
  VectorXd p_, q_, reaction_;

  friend class Stepper;
};

// Single-step conveniences.
ScalarField step(const ScalarField& u, const DoubleWellPotential& p,
                 const SchemeConfig& cfg,
                 const ScalarField* profile_ref = nullptr);
ScalarField step_linear(const ScalarField& q, double mu,
                        const SchemeConfig& cfg);

// Total energy E(u) = 1/2 int |grad u|^2 + int_Gamma W(u): trapezoid
// quadrature, centered-difference gradient.
double energy(const ScalarField& u, const DoubleWellPotential& p);
// Dissipation Q = int (Lap u)^2 + int_Gamma (du/dy - W'(u))^2 with the
// same stencils the stepper uses.
double dissipation(const ScalarField& u, const DoubleWellPotential& p);

struct Trajectory {
  std::vector<double> times;        // diagnostic record times
  std::vector<double> trace_sup;    // sup |u(x,0)| at those times
  std::vector<double> energy;       // E
  std::vector<double> dissipation;  // Q
  std::vector<double> snapshot_times;
  std::vector<ScalarField> snapshots;
};

// Iterates the stepper to time T, recording diagnostics every
// record_every and snapshots every snapshot_every (0 means: same cadence
// as record_every). Deterministic given inputs. Step errors propagate
// with the failing time attached.
Trajectory evolve(const ScalarField& u0, const DoubleWellPotential& p,
                  const SchemeConfig& cfg, double T, double record_every,
                  double snapshot_every = 0.0,
                  const ScalarField* profile_ref = nullptr);

enum class SeedKind { Shifted, Perturbed };
struct SeedParams {
  SeedKind kind = SeedKind::Perturbed;
  double shift = 0.0;      // Shifted: u0 = phi(x - shift, y)
  double amplitude = 0.3;  // Perturbed: Gaussian bump height
  double center_x = 0.0;
  double center_y = 2.0;
  double width = 2.0;
  double xi1 = 1.0;  // certified corridor: phi(x-xi1) - q0 <= u0
  double xi2 = 1.0;  //                     u0 <= phi(x+xi2) + q0
};

struct InitialData {
  ScalarField u0;
  ScalarField q0;  // positive perturbation envelope, decays at far field
  double xi1 = 0.0;
  double xi2 = 0.0;
};

// Builds initial data inside the two-sided corridor
//   phi(x-xi1, y) - q0 <= u0 <= phi(x+xi2, y) + q0
// and certifies it pointwise on the grid. Throws AmplitudeError when the
// perturbation pushes |u0| >= 1.
InitialData initial_data(const SteadyProfile& prof, const SeedParams& sp);

// Minimizes sup |u - phi(. - s, .)| over s by golden-section search inside
// [-bracket, bracket] (default Lx/4); returns (argmin shift, attained sup).
std::pair<double, double> sup_distance_to_profile(const ScalarField& u,
                                                  const SteadyProfile& prof,
                                                  double bracket = 0.0);

}  // namespace mflab
