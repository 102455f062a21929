#include "mflab/analysis.hpp"

#include <cmath>

namespace mflab {

using std::complex;

DecayFit fit_decay(const Eigen::Ref<const VectorXd>& times,
                   const Eigen::Ref<const VectorXd>& norms,
                   std::pair<double, double> window) {
  if (times.size() != norms.size())
    throw FitError("fit_decay: times/norms size mismatch");
  std::vector<double> lt, ln;
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < window.first || t > window.second) continue;
    if (!(norms[i] > 0.0))
      throw FitError("fit_decay: non-positive norm inside the fit window");
    lt.push_back(std::log(t));
    ln.push_back(std::log(norms[i]));
  }
  if (lt.size() < 8)
    throw FitError("fit_decay: need at least 8 samples in the window");
  const LineFit lf = fit_line(Eigen::Map<VectorXd>(lt.data(), lt.size()),
                              Eigen::Map<VectorXd>(ln.data(), ln.size()));
  DecayFit fit;
  fit.exponent = lf.slope;
  fit.amplitude = std::exp(lf.intercept);
  fit.window = window;
  fit.residual_rms = lf.residual_rms;
  return fit;
}

BranchData branch_root(double eta, double mu) {
  if (!(mu > 0.0)) throw ParameterError("branch_root: mu must be positive");
  BranchData b;
  b.eta = eta;
  b.mu = mu;
  const double s = eta * eta - mu;
  if (s >= 0.0) {
    const double w = 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * s));  // sqrt(r*)
    b.r_star = w * w;
    b.spectral_abscissa = w * w - eta * eta;
  }
  return b;
}

complex<double> boundary_symbol(complex<double> lambda, double eta,
                                double mu) {
  const double eta2 = eta * eta;
  if (lambda.imag() == 0.0 && lambda.real() <= -eta2)
    throw BranchError("boundary_symbol: lambda on the branch cut");
  return 1.0 / (lambda + mu + std::sqrt(lambda + eta2));
}

namespace {

MatrixXd gaussian_pass_matrix(const HalfPlaneGrid& g, double t) {
  // 1D heat kernel weights in x with trapezoid quadrature.
  const int nx = g.nx;
  const double pref = 1.0 / std::sqrt(4.0 * M_PI * t);
  MatrixXd K(nx, nx);
  for (int i = 0; i < nx; ++i)
    for (int k = 0; k < nx; ++k) {
      const double d = g.x(i) - g.x(k);
      double w = (k == 0 || k == nx - 1) ? 0.5 : 1.0;
      K(i, k) = pref * std::exp(-d * d / (4.0 * t)) * w * g.dx;
    }
  return K;
}

void require_bulk_only(const ScalarField& q0) {
  if (q0.values().col(0).array().abs().maxCoeff() != 0.0)
    throw ParameterError("q2_solution: data must have a zero boundary row");
}

}  // namespace

ScalarField q2_solution(const ScalarField& q0_bulk, double t) {
  if (!(t > 0.0)) throw DomainError("q2_solution: t must be positive");
  require_bulk_only(q0_bulk);
  const HalfPlaneGrid& g = q0_bulk.grid();
  const MatrixXd Kx = gaussian_pass_matrix(g, t);
  const MatrixXd A = Kx * q0_bulk.values();  // x-pass, (nx x ny)
  const double pref = 1.0 / std::sqrt(4.0 * M_PI * t);
  MatrixXd Ky(g.ny, g.ny);  // Ky(j, jp): image-difference kernel in y
  for (int j = 0; j < g.ny; ++j)
    for (int jp = 0; jp < g.ny; ++jp) {
      const double dm = g.y(j) - g.y(jp);
      const double dp = g.y(j) + g.y(jp);
      double w = (jp == g.ny - 1) ? 0.5 : 1.0;  // jp = 0 row is zero anyway
      Ky(j, jp) = pref *
                  (std::exp(-dm * dm / (4.0 * t)) -
                   std::exp(-dp * dp / (4.0 * t))) *
                  w * g.dy;
    }
  ScalarField out(g);
  out.values() = A * Ky.transpose();
  return out;
}

BoundaryTrace q2_dy_trace(const ScalarField& q0_bulk, double t) {
  if (!(t > 0.0)) throw DomainError("q2_dy_trace: t must be positive");
  require_bulk_only(q0_bulk);
  const HalfPlaneGrid& g = q0_bulk.grid();
  const MatrixXd Kx = gaussian_pass_matrix(g, t);
  const MatrixXd A = Kx * q0_bulk.values();
  const double pref = 1.0 / std::sqrt(4.0 * M_PI * t);
  VectorXd ky(g.ny);  // d/dy at y=0 of the image-difference kernel
  for (int jp = 0; jp < g.ny; ++jp) {
    const double yp = g.y(jp);
    const double w = (jp == g.ny - 1) ? 0.5 : 1.0;
    ky[jp] = pref * (yp / t) * std::exp(-yp * yp / (4.0 * t)) * w * g.dy;
  }
  return BoundaryTrace(g, A * ky);
}

double kernel_eta_inverse(double t, double eta, double mu, int n_contour,
                          double sigma0) {
  const BranchData b = branch_root(eta, mu);
  const double rightmost =
      b.spectral_abscissa ? *b.spectral_abscissa : -eta * eta;
  if (std::isnan(sigma0)) sigma0 = 0.5 * rightmost;
  if (sigma0 > 0.0 || sigma0 <= rightmost)
    throw ContourError(
        "kernel_eta_inverse: contour shift must lie in (rightmost "
        "singularity, 0]");
  // Abate-Valko fixed Talbot on the shifted symbol.
  const int N = n_contour;
  const double r = 2.0 * N / (5.0 * t);
  auto H = [&](complex<double> lam) {
    return boundary_symbol(lam + sigma0, eta, mu);
  };
  double sum = 0.5 * std::exp(r * t) * H(complex<double>(r, 0.0)).real();
  for (int k = 1; k < N; ++k) {
    const double th = k * M_PI / N;
    const double cot = std::cos(th) / std::sin(th);
    const complex<double> s(r * th * cot, r * th);
    const double sig = th + (th * cot - 1.0) * cot;
    const complex<double> val =
        std::exp(s * t) * H(s) * complex<double>(1.0, sig);
    sum += val.real();
  }
  return std::exp(sigma0 * t) * (r / N) * sum;
}

VectorXd inverse_kernel_row(double t, const Eigen::Ref<const VectorXd>& xs,
                            double mu, int n_eta, int n_contour) {
  if (!(t > 0.0)) throw DomainError("inverse_kernel: t must be positive");
  const double eta_max = 12.0 / std::sqrt(t);
  const double de = eta_max / (n_eta - 1);
  VectorXd F(n_eta);
  for (int k = 0; k < n_eta; ++k)
    F[k] = kernel_eta_inverse(t, k * de, mu, n_contour);
  VectorXd out(xs.size());
  for (Eigen::Index m = 0; m < xs.size(); ++m) {
    // (1/pi) int_0^eta_max cos(x eta) F(t, eta) d eta, trapezoid
    double s = 0.5 * F[0];
    for (int k = 1; k < n_eta - 1; ++k) s += std::cos(xs[m] * k * de) * F[k];
    s += 0.5 * std::cos(xs[m] * eta_max) * F[n_eta - 1];
    out[m] = s * de / M_PI;
  }
  return out;
}

double inverse_kernel(double t, double x, double mu) {
  VectorXd xs(1);
  xs[0] = x;
  return inverse_kernel_row(t, xs, mu)[0];
}

BoundaryTrace linear_trace_via_kernel(const BoundaryTrace& q0s, double t,
                                      double mu) {
  const HalfPlaneGrid& g = q0s.grid;
  const int nx = g.nx;
  VectorXd offsets(nx);
  for (int m = 0; m < nx; ++m) offsets[m] = m * g.dx;  // kernel is even in x
  const VectorXd K = inverse_kernel_row(t, offsets, mu);
  VectorXd out(nx);
  for (int i = 0; i < nx; ++i) {
    double s = 0.0;
    for (int k = 0; k < nx; ++k) {
      const double w = (k == 0 || k == nx - 1) ? 0.5 : 1.0;
      s += w * K[std::abs(i - k)] * q0s.values[k];
    }
    out[i] = s * g.dx;
  }
  return BoundaryTrace(g, std::move(out));
}

DecayExperimentResult linear_decay_experiment(const ScalarField& q0,
                                              double mu,
                                              const SchemeConfig& cfg,
                                              double T, DecayObservable obs,
                                              double record_every) {
  if (!(T > 0.0)) throw ParameterError("linear_decay_experiment: T <= 0");
  LinearStepper st(mu, cfg, q0.grid());
  const HalfPlaneGrid& g = q0.grid();
  const long n_steps = std::lround(T / cfg.dt);
  const long stride = std::max(1L, std::lround(record_every / cfg.dt));
  ScalarField u = q0;
  std::vector<double> ts, ns;
  auto observe = [&]() {
    if (obs == DecayObservable::TraceSup) return sup_norm(trace(u));
    double m = 0.0;
    for (int i = 0; i < g.nx; ++i)
      m = std::max(m, std::abs((-3.0 * u(i, 0) + 4.0 * u(i, 1) - u(i, 2)) /
                               (2.0 * g.dy)));
    return m;
  };
  for (long n = 1; n <= n_steps; ++n) {
    st.advance(u);
    if (n % stride == 0 || n == n_steps) {
      ts.push_back(n * cfg.dt);
      ns.push_back(observe());
    }
  }
  DecayExperimentResult res;
  res.times = Eigen::Map<VectorXd>(ts.data(), ts.size());
  res.norms = Eigen::Map<VectorXd>(ns.data(), ns.size());
  res.fit = fit_decay(res.times, res.norms, {T / 10.0, T});
  return res;
}

EnvelopeReport envelope_check(const Trajectory& traj,
                              const SteadyProfile& prof,
                              const ScalarField& q0,
                              const EnvelopeParams& params, double t_min) {
  if (params.M < 0.0 || !(params.C > 0.0))
    throw ParameterError("envelope_check: need M >= 0 and C > 0");
  if (params.xi1 < 0.0 || params.xi2 < 0.0)
    throw ParameterError("envelope_check: need xi1, xi2 >= 0");
  if (!(t_min > 0.0))
    throw ParameterError("envelope_check: t_min must be positive");
  const HalfPlaneGrid& g = prof.field.grid();
  if (q0.grid() != g)
    throw DimensionError("envelope_check: q0 grid mismatch");

  constexpr int collar = 4;
  EnvelopeReport rep;
  rep.params = params;
  for (size_t n = 0; n < traj.snapshots.size(); ++n) {
    const double t = traj.snapshot_times[n];
    if (t < t_min) continue;
    const ScalarField& u = traj.snapshots[n];
    const double widen = 2.0 * params.M / std::sqrt(t);
    const double damp = 1.0 / (1.0 + params.C * std::pow(t, 1.5));
    const ScalarField lower = shift_in_x(prof.field, params.xi1 + widen);
    const ScalarField upper = shift_in_x(prof.field, -(params.xi2 + widen));
    EnvelopeTimeRecord rec;
    rec.t = t;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double cushion = q0(i, j) * damp;
        const double over = u(i, j) - (upper(i, j) + cushion);
        const double under = (lower(i, j) - cushion) - u(i, j);
        const bool edge =
            i < collar || i >= g.nx - collar || j >= g.ny - collar;
        const double worst = std::max(over, under);
        if (edge) {
          rec.edge_violation = std::max(rec.edge_violation, worst);
          continue;
        }
        if (over > rec.upper_violation) {
          rec.upper_violation = over;
          rec.worst_i = i;
          rec.worst_j = j;
        }
        if (under > rec.lower_violation) {
          rec.lower_violation = under;
          rec.worst_i = i;
          rec.worst_j = j;
        }
      }
    rec.upper_violation = std::max(rec.upper_violation, 0.0);
    rec.lower_violation = std::max(rec.lower_violation, 0.0);
    rec.edge_violation = std::max(rec.edge_violation, 0.0);
    rep.records.push_back(rec);
    rep.max_upper_violation =
        std::max(rep.max_upper_violation, rec.upper_violation);
    rep.max_lower_violation =
        std::max(rep.max_lower_violation, rec.lower_violation);
    rep.edge_violation = std::max(rep.edge_violation, rec.edge_violation);
  }
  return rep;
}

}  // namespace mflab
