#include "mflab/dynamics.hpp"

#include <cmath>

namespace mflab {

void validate_scheme(const SchemeConfig& cfg, const HalfPlaneGrid& g,
                     double max_abs_w2) {
  if (!(cfg.dt > 0.0)) throw ParameterError("scheme: dt must be positive");
  if (cfg.scheme == Scheme::ExplicitEuler) {
    const double cap = std::min(g.dx * g.dx, g.dy * g.dy) / 4.0;
    if (cfg.dt > cap)
      throw ParameterError(
          "scheme: ExplicitEuler requires dt <= min(dx^2, dy^2)/4 = " +
          std::to_string(cap));
    if (max_abs_w2 > 0.0 && cfg.dt > 1.0 / max_abs_w2)
      throw ParameterError(
          "scheme: ExplicitEuler requires dt <= 1/max|W''| = " +
          std::to_string(1.0 / max_abs_w2));
  }
}

namespace {

void check_finite(const ScalarField& u, const char* who) {
  if (all_finite(u)) return;
  const HalfPlaneGrid& g = u.grid();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (!std::isfinite(u(i, j)))
        throw BlowUpError(std::string(who) + ": non-finite value at node (" +
                              std::to_string(i) + "," + std::to_string(j) +
                              ")",
                          i, j, 0.0);
}

// Stage 1 of the direction split: backward-Euler x-diffusion on the bulk
// rows, Dirichlet ends. The boundary row has no x-term and passes through.
void x_sweep(MatrixXd& grid_vals, const HalfPlaneGrid& g, double dt,
             const VectorXd& clamp_left, const VectorXd& clamp_right) {
  const int nx = g.nx, ny = g.ny;
  const double s = dt / (g.dx * g.dx);
  const int n = nx - 2;
  VectorXd diag(n), rhs(n);
  const VectorXd lower = VectorXd::Constant(n, -s);
  const VectorXd upper = VectorXd::Constant(n, -s);
  for (int j = 1; j < ny - 1; ++j) {
    diag.setConstant(1.0 + 2.0 * s);
    for (int i = 0; i < n; ++i) rhs[i] = grid_vals(i + 1, j);
    rhs[0] += s * clamp_left[j];
    rhs[n - 1] += s * clamp_right[j];
    solve_tridiagonal<double>(lower, diag, upper, rhs);
    for (int i = 0; i < n; ++i) grid_vals(i + 1, j) = rhs[i];
  }
}

// Stage 2: backward-Euler y-diffusion per column with the dynamic boundary
// row solved monolithically. The boundary row couples to rows 1 and 2
// through the one-sided second-order du/dy stencil, so the column system is
// tridiagonal except for one extra entry in row 0; a top-down substitution
// u_{j+1} = p_{j+1} + q_{j+1} u_j reduces it to a scalar equation for u_0.
void y_sweep(MatrixXd& vals, const HalfPlaneGrid& g, double dt,
             const VectorXd& reaction, const VectorXd& clamp_top, bool top_neumann,
             VectorXd& p, VectorXd& q) {
  const int nx = g.nx, ny = g.ny;
  const double r = dt / (g.dy * g.dy);
  const double gma = dt / (2.0 * g.dy);
  const int J = ny - 1;
  for (int i = 1; i < nx - 1; ++i) {
    if (top_neumann) {
      p[J] = 0.0;
      q[J] = 1.0;
    } else {
      p[J] = clamp_top[i];
      q[J] = 0.0;
    }
    for (int j = J - 1; j >= 1; --j) {
      const double denom = 1.0 + 2.0 * r - r * q[j + 1];
      p[j] = (vals(i, j) + r * p[j + 1]) / denom;
      q[j] = r / denom;
    }
    const double d0 = vals(i, 0) - dt * reaction[i];
    const double denom0 =
        (1.0 + 3.0 * gma) - 4.0 * gma * q[1] + gma * q[2] * q[1];
    const double rhs0 = d0 + 4.0 * gma * p[1] - gma * (p[2] + q[2] * p[1]);
    double prev = rhs0 / denom0;
    vals(i, 0) = prev;
    for (int j = 1; j <= J; ++j) {
      prev = p[j] + q[j] * prev;
      vals(i, j) = prev;
    }
  }
}

void apply_lateral_clamps(MatrixXd& vals, const VectorXd& left,
                          const VectorXd& right) {
  vals.row(0) = left.transpose();
  vals.row(vals.rows() - 1) = right.transpose();
}

void explicit_step(MatrixXd& vals, const HalfPlaneGrid& g, double dt,
                   const VectorXd& reaction, const VectorXd& clamp_left,
                   const VectorXd& clamp_right, const VectorXd& clamp_top,
                   bool top_neumann, MatrixXd& work) {
  const int nx = g.nx, ny = g.ny;
  const double ax = dt / (g.dx * g.dx);
  const double ay = dt / (g.dy * g.dy);
  const double gma = dt / (2.0 * g.dy);
  work = vals;
  for (int j = 1; j < ny - 1; ++j)
    for (int i = 1; i < nx - 1; ++i)
      work(i, j) = vals(i, j) +
                   ax * (vals(i - 1, j) - 2.0 * vals(i, j) + vals(i + 1, j)) +
                   ay * (vals(i, j - 1) - 2.0 * vals(i, j) + vals(i, j + 1));
  for (int i = 1; i < nx - 1; ++i)
    work(i, 0) = vals(i, 0) +
                 gma * (-3.0 * vals(i, 0) + 4.0 * vals(i, 1) - vals(i, 2)) -
                 dt * reaction[i];
  if (top_neumann)
    for (int i = 1; i < nx - 1; ++i) work(i, ny - 1) = work(i, ny - 2);
  else
    for (int i = 1; i < nx - 1; ++i) work(i, ny - 1) = clamp_top[i];
  vals.swap(work);
  apply_lateral_clamps(vals, clamp_left, clamp_right);
}

void semi_implicit_step(MatrixXd& vals, const HalfPlaneGrid& g, double dt,
                        const VectorXd& reaction, const VectorXd& clamp_left,
                        const VectorXd& clamp_right, const VectorXd& clamp_top,
                        bool top_neumann, VectorXd& p, VectorXd& q) {
  x_sweep(vals, g, dt, clamp_left, clamp_right);
  y_sweep(vals, g, dt, reaction, clamp_top, top_neumann, p, q);
  if (!top_neumann)
    for (int i = 1; i < g.nx - 1; ++i) vals(i, g.ny - 1) = clamp_top[i];
  apply_lateral_clamps(vals, clamp_left, clamp_right);
}

}  // namespace

Stepper::Stepper(const DoubleWellPotential& p, const SchemeConfig& cfg,
                 const HalfPlaneGrid& g, const ScalarField* profile_ref)
    : pot_(p), cfg_(cfg), grid_(g) {
  validate_scheme(cfg, g, p.max_abs_w2());
  ScalarField fallback;
  const ScalarField* ref = profile_ref;
  if (ref == nullptr && (cfg.bc_x == LateralBC::ClampToProfile ||
                         cfg.bc_top == TopBC::ClampToProfile)) {
    fallback = closed_form_phi_field(g);
    ref = &fallback;
  }
  clamp_left_.resize(g.ny);
  clamp_right_.resize(g.ny);
  clamp_top_.resize(g.nx);
  if (cfg.bc_x == LateralBC::ClampToProfile) {
    if (ref->grid() != g)
      throw DimensionError("Stepper: profile_ref grid mismatch");
    clamp_left_ = ref->values().row(0).transpose();
    clamp_right_ = ref->values().row(g.nx - 1).transpose();
  } else {
    clamp_left_.setConstant(-1.0);
    clamp_right_.setConstant(1.0);
  }
  if (cfg.bc_top == TopBC::ClampToProfile)
    clamp_top_ = ref->values().col(g.ny - 1);
  else
    clamp_top_.setZero();
  p_.resize(g.ny);
  q_.resize(g.ny);
  reaction_.resize(g.nx);
  if (cfg.scheme == Scheme::ExplicitEuler) work_.resize(g.nx, g.ny);
}

void Stepper::advance(ScalarField& u) {
  if (u.grid() != grid_) throw DimensionError("Stepper: field grid mismatch");
  for (int i = 0; i < grid_.nx; ++i) reaction_[i] = pot_.w_prime(u(i, 0));
  const bool top_neumann = cfg_.bc_top == TopBC::HomogeneousNeumann;
  if (cfg_.scheme == Scheme::ExplicitEuler)
    explicit_step(u.values(), grid_, cfg_.dt, reaction_, clamp_left_,
                  clamp_right_, clamp_top_, top_neumann, work_);
  else
    semi_implicit_step(u.values(), grid_, cfg_.dt, reaction_, clamp_left_,
                       clamp_right_, clamp_top_, top_neumann, p_, q_);
  check_finite(u, "step");
}

LinearStepper::LinearStepper(double mu, const SchemeConfig& cfg,
                             const HalfPlaneGrid& g)
    : mu_(mu), cfg_(cfg), grid_(g) {
  if (!(mu > 0.0)) throw ParameterError("LinearStepper: mu must be positive");
  validate_scheme(cfg, g, mu);
  p_.resize(g.ny);
  q_.resize(g.ny);
  reaction_.resize(g.nx);
  if (cfg.scheme == Scheme::ExplicitEuler) work_.resize(g.nx, g.ny);
}

void LinearStepper::advance(ScalarField& u) {
  if (u.grid() != grid_)
    throw DimensionError("LinearStepper: field grid mismatch");
  for (int i = 0; i < grid_.nx; ++i) reaction_[i] = mu_ * u(i, 0);
  const VectorXd zeros_col = VectorXd::Zero(grid_.ny);
  const VectorXd zeros_row = VectorXd::Zero(grid_.nx);
  if (cfg_.scheme == Scheme::ExplicitEuler)
    explicit_step(u.values(), grid_, cfg_.dt, reaction_, zeros_col, zeros_col,
                  zeros_row, false, work_);
  else
    semi_implicit_step(u.values(), grid_, cfg_.dt, reaction_, zeros_col,
                       zeros_col, zeros_row, false, p_, q_);
  check_finite(u, "step_linear");
}

ScalarField step(const ScalarField& u, const DoubleWellPotential& p,
                 const SchemeConfig& cfg, const ScalarField* profile_ref) {
  Stepper st(p, cfg, u.grid(), profile_ref);
  ScalarField out = u;
  st.advance(out);
  return out;
}

ScalarField step_linear(const ScalarField& q, double mu,
                        const SchemeConfig& cfg) {
  LinearStepper st(mu, cfg, q.grid());
  ScalarField out = q;
  st.advance(out);
  return out;
}

double energy(const ScalarField& u, const DoubleWellPotential& p) {
  const HalfPlaneGrid& g = u.grid();
  double bulk = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    const double wy = (j == 0 || j == g.ny - 1) ? 0.5 : 1.0;
    for (int i = 0; i < g.nx; ++i) {
      const double wx = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
      double gx, gy;
      if (i == 0)
        gx = (u(1, j) - u(0, j)) / g.dx;
      else if (i == g.nx - 1)
        gx = (u(i, j) - u(i - 1, j)) / g.dx;
      else
        gx = (u(i + 1, j) - u(i - 1, j)) / (2.0 * g.dx);
      if (j == 0)
        gy = (u(i, 1) - u(i, 0)) / g.dy;
      else if (j == g.ny - 1)
        gy = (u(i, j) - u(i, j - 1)) / g.dy;
      else
        gy = (u(i, j + 1) - u(i, j - 1)) / (2.0 * g.dy);
      bulk += wx * wy * (gx * gx + gy * gy);
    }
  }
  bulk *= 0.5 * g.dx * g.dy;
  double gamma = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    const double wx = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
    gamma += wx * p.w(u(i, 0));
  }
  gamma *= g.dx;
  return bulk + gamma;
}

double dissipation(const ScalarField& u, const DoubleWellPotential& p) {
  const HalfPlaneGrid& g = u.grid();
  double bulk = 0.0;
  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 1; i < g.nx - 1; ++i) {
      const double lap =
          (u(i - 1, j) - 2.0 * u(i, j) + u(i + 1, j)) / (g.dx * g.dx) +
          (u(i, j - 1) - 2.0 * u(i, j) + u(i, j + 1)) / (g.dy * g.dy);
      bulk += lap * lap;
    }
  bulk *= g.dx * g.dy;
  double gamma = 0.0;
  for (int i = 0; i < g.nx; ++i) {
    const double wx = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
    const double flux =
        (-3.0 * u(i, 0) + 4.0 * u(i, 1) - u(i, 2)) / (2.0 * g.dy);
    const double r = flux - p.w_prime(u(i, 0));
    gamma += wx * r * r;
  }
  gamma *= g.dx;
  return bulk + gamma;
}

Trajectory evolve(const ScalarField& u0, const DoubleWellPotential& p,
                  const SchemeConfig& cfg, double T, double record_every,
                  double snapshot_every, const ScalarField* profile_ref) {
  if (!(T > 0.0)) throw ParameterError("evolve: T must be positive");
  if (!(record_every > 0.0))
    throw ParameterError("evolve: record_every must be positive");
  if (snapshot_every <= 0.0) snapshot_every = record_every;
  Stepper st(p, cfg, u0.grid(), profile_ref);
  const long n_steps = std::lround(T / cfg.dt);
  const long rec_stride = std::max(1L, std::lround(record_every / cfg.dt));
  const long snap_stride = std::max(1L, std::lround(snapshot_every / cfg.dt));

  Trajectory traj;
  ScalarField u = u0;
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.trace_sup.push_back(sup_norm(trace(u)));
    traj.energy.push_back(energy(u, p));
    traj.dissipation.push_back(dissipation(u, p));
  };
  auto snap = [&](double t) {
    traj.snapshot_times.push_back(t);
    traj.snapshots.push_back(u);
  };
  record(0.0);
  snap(0.0);
  for (long n = 1; n <= n_steps; ++n) {
    const double t = n * cfg.dt;
    try {
      st.advance(u);
    } catch (const BlowUpError& e) {
      throw BlowUpError(std::string(e.what()) + " at t=" + std::to_string(t),
                        e.i, e.j, t);
    }
    if (n % rec_stride == 0 || n == n_steps) record(t);
    if (n % snap_stride == 0 || n == n_steps) snap(t);
  }
  return traj;
}

InitialData initial_data(const SteadyProfile& prof, const SeedParams& sp) {
  const HalfPlaneGrid& g = prof.field.grid();
  InitialData out;
  if (sp.kind == SeedKind::Shifted) {
    out.u0 = shift_in_x(prof.field, sp.shift);
    out.q0 = ScalarField(g, 0.0);
    out.xi1 = out.xi2 = std::abs(sp.shift);
  } else {
    const double a = sp.amplitude;
    out.q0 = ScalarField::from_function(g, [&](double x, double y) {
      const double rx = (x - sp.center_x) / sp.width;
      const double ry = (y - sp.center_y) / sp.width;
      return std::abs(a) * std::exp(-0.5 * (rx * rx + ry * ry));
    });
    out.u0 = prof.field;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        out.u0(i, j) += (a < 0 ? -1.0 : 1.0) * out.q0(i, j);
    out.xi1 = sp.xi1;
    out.xi2 = sp.xi2;
  }
  if (!(sup_norm(out.u0) < 1.0))
    throw AmplitudeError(
        "initial_data: perturbation pushes |u0| >= 1 somewhere");

  // Certify the corridor phi(x-xi1) - q0 <= u0 <= phi(x+xi2) + q0.
  const ScalarField lower = shift_in_x(prof.field, out.xi1);
  const ScalarField upper = shift_in_x(prof.field, -out.xi2);
  const double slack = 1e-9;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (out.u0(i, j) < lower(i, j) - out.q0(i, j) - slack ||
          out.u0(i, j) > upper(i, j) + out.q0(i, j) + slack)
        throw AmplitudeError(
            "initial_data: constructed data escapes the certified corridor "
            "at (" +
            std::to_string(g.x(i)) + "," + std::to_string(g.y(j)) + ")");
    }
  return out;
}

std::pair<double, double> sup_distance_to_profile(const ScalarField& u,
                                                  const SteadyProfile& prof,
                                                  double bracket) {
  if (u.grid() != prof.field.grid())
    throw DimensionError("sup_distance_to_profile: grid mismatch");
  const HalfPlaneGrid& g = u.grid();
  if (bracket <= 0.0) bracket = g.Lx / 4.0;
  auto objective = [&](double s) {
    return sup_diff(u, shift_in_x(prof.field, s));
  };
  const double s_star =
      golden_section_minimize(objective, -bracket, bracket, g.dx / 20.0);
  return {s_star, objective(s_star)};
}

}  // namespace mflab
