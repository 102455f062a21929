#include "mflab/steady.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>

namespace mflab {

ProfileTriple closed_form_phi(double x, double y) {
  const double yp = y + 1.0;
  const double d = yp * yp + x * x;
  ProfileTriple t;
  t.phi = (2.0 / M_PI) * std::atan2(x, yp);
  t.dphi_dx = (2.0 / M_PI) * yp / d;
  t.dphi_dy = -(2.0 / M_PI) * x / d;
  return t;
}

ScalarField closed_form_phi_field(const HalfPlaneGrid& g) {
  return ScalarField::from_function(
      g, [](double x, double y) { return closed_form_phi(x, y).phi; });
}

BoundaryTrace half_laplacian_quadrature(const BoundaryTrace& g) {
  const int n = g.grid.nx;
  const double h = g.grid.dx;
  const double L = g.grid.Lx;
  const VectorXd& v = g.values;
  VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    const double xi = g.grid.x(i);
    const double vi = v[i];
    // Composite trapezoid over [-L, xi-h] and [xi+h, L]; the punctured
    // cell contributes -g''(xi) * h (leading finite part).
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      const double d = xi - g.grid.x(k);
      double w = h;
      if (k == 0 || k == n - 1 || std::abs(k - i) == 1) w = 0.5 * h;
      s += w * (vi - v[k]) / (d * d);
    }
    double g2;
    if (i == 0)
      g2 = (v[2] - 2.0 * v[1] + v[0]) / (h * h);
    else if (i == n - 1)
      g2 = (v[n - 1] - 2.0 * v[n - 2] + v[n - 3]) / (h * h);
    else
      g2 = (v[i + 1] - 2.0 * vi + v[i - 1]) / (h * h);
    s -= g2 * h;
    // Constant extension beyond the ends: the tail integrals are exact.
    if (i != n - 1) s += (vi - v[n - 1]) / (L - xi);
    if (i != 0) s += (vi - v[0]) / (xi + L);
    out[i] = s / M_PI;
  }
  return BoundaryTrace(g.grid, std::move(out));
}

BoundaryTrace half_laplacian_periodic(const BoundaryTrace& v) {
  // Even mirror extension (period 4*Lx). Grid-periodic cosine modes are
  // reproduced exactly; a small end-value mismatch becomes a kink instead
  // of a jump, which keeps the multiplier from ringing.
  const int n = v.grid.nx;
  const int m = n - 1;
  const int mm = 2 * m;
  Eigen::FFT<double> fft;
  Eigen::VectorXcd in(mm), freq(mm);
  for (int i = 0; i <= m; ++i) in[i] = v.values[i];
  for (int i = 1; i < m; ++i) in[mm - i] = v.values[i];
  fft.fwd(freq, in);
  const double base = M_PI / (2.0 * v.grid.Lx);  // fundamental of period 4*Lx
  for (int k = 0; k < mm; ++k) {
    const int kk = (k <= mm / 2) ? k : k - mm;
    freq[k] *= std::abs(kk) * base;
  }
  Eigen::VectorXcd back(mm);
  fft.inv(back, freq);
  VectorXd out(n);
  for (int i = 0; i < n; ++i) out[i] = back[i].real();
  return BoundaryTrace(v.grid, std::move(out));
}

BoundaryTrace half_laplacian(const BoundaryTrace& t,
                             const BoundaryTrace& reference) {
  if (t.grid != reference.grid)
    throw DimensionError("half_laplacian: trace/reference grid mismatch");
  VectorXd dev = t.values - reference.values;
  const double scale = 1.0 + dev.array().abs().maxCoeff();
  if (std::abs(dev[0] - dev[dev.size() - 1]) > 0.02 * scale)
    throw TailError(
        "half_laplacian: t - reference does not decay (or wrap) at the "
        "domain ends");
  BoundaryTrace devt(t.grid, std::move(dev));
  BoundaryTrace spec = half_laplacian_periodic(devt);
  BoundaryTrace ref = half_laplacian_quadrature(reference);
  return BoundaryTrace(t.grid, spec.values + ref.values);
}

ScalarField harmonic_extension(const BoundaryTrace& t,
                               const HalfPlaneGrid& g) {
  if (t.grid.nx != g.nx || t.grid.Lx != g.Lx)
    throw DimensionError("harmonic_extension: trace not on the grid's nodes");
  const int nx = g.nx, ny = g.ny;
  const double h = g.dx, L = g.Lx;
  const VectorXd& v = t.values;
  ScalarField out(g);
  for (int i = 0; i < nx; ++i) out(i, 0) = v[i];
  const double vl = v[0], vr = v[nx - 1];
  // u(x,y) = (1/pi) int y g(x') / ((x-x')^2 + y^2) dx' with g continued by
  // its end values. Trapezoid sampling of the kernel aliases like
  // exp(-2 pi y / dx), so rows with y < 8 dx integrate the piecewise-linear
  // interpolant of g against the kernel exactly (atan/log antiderivatives);
  // higher rows use the plain trapezoid.
  VectorXd atans(nx), logs(nx);
  for (int j = 1; j < ny; ++j) {
    const double y = g.y(j);
    const double y2 = y * y;
    const bool exact_rows = y < 8.0 * h;
    for (int i = 0; i < nx; ++i) {
      const double x = g.x(i);
      double s = 0.0;
      if (exact_rows) {
        for (int k = 0; k < nx; ++k) {
          const double d = g.x(k) - x;
          atans[k] = std::atan(d / y);
          logs[k] = std::log(d * d + y2);
        }
        for (int k = 0; k + 1 < nx; ++k) {
          const double a = g.x(k) - x;
          const double m = (v[k + 1] - v[k]) / h;
          s += (v[k] - m * a) * (atans[k + 1] - atans[k]) +
               m * 0.5 * y * (logs[k + 1] - logs[k]);
        }
      } else {
        for (int k = 0; k < nx; ++k) {
          const double d = x - g.x(k);
          const double w = (k == 0 || k == nx - 1) ? 0.5 * h : h;
          s += w * v[k] / (d * d + y2);
        }
        s *= y;
      }
      s += vr * (0.5 * M_PI - std::atan((L - x) / y));
      s += vl * (std::atan((-L - x) / y) + 0.5 * M_PI);
      out(i, j) = s / M_PI;
    }
  }
  return out;
}

namespace {

// One-sided second-order d/dy at the boundary row.
double dy_one_sided(const ScalarField& f, int i) {
  const double dy = f.grid().dy;
  return (-3.0 * f(i, 0) + 4.0 * f(i, 1) - f(i, 2)) / (2.0 * dy);
}

// Discrete residuals, measured away from the artificial lateral/top edges
// (4-node collar) where the truncation itself dominates.
std::pair<double, double> profile_residuals(const ScalarField& field,
                                            const DoubleWellPotential& p) {
  const HalfPlaneGrid& g = field.grid();
  constexpr int collar = 4;
  double bulk = 0.0;
  for (int j = 1; j < g.ny - collar; ++j)
    for (int i = collar; i < g.nx - collar; ++i) {
      const double lap =
          (field(i - 1, j) - 2.0 * field(i, j) + field(i + 1, j)) /
              (g.dx * g.dx) +
          (field(i, j - 1) - 2.0 * field(i, j) + field(i, j + 1)) /
              (g.dy * g.dy);
      bulk = std::max(bulk, std::abs(lap));
    }
  double bdry = 0.0;
  for (int i = collar; i < g.nx - collar; ++i)
    bdry = std::max(bdry,
                    std::abs(dy_one_sided(field, i) - p.w_prime(field(i, 0))));
  return {bulk, bdry};
}

BoundaryTrace arctan_reference(const HalfPlaneGrid& g, double shift) {
  return BoundaryTrace::from_function(g, [shift](double x) {
    return (2.0 / M_PI) * std::atan(x - shift);
  });
}

// Shifts a transition trace by s, extending beyond the ends with the
// fat-tail model +-1 - c/x matched to the end values, so a recentred trace
// keeps a strictly positive slope all the way to the boundary nodes.
VectorXd shift_trace_tail_model(const BoundaryTrace& t, double s) {
  const HalfPlaneGrid& g = t.grid;
  const int n = g.nx;
  const int pad = 8;
  const double xr = g.x(n - 1), xl = g.x(0);
  const double cr = (1.0 - t.values[n - 1]) * xr;
  const double cl = (1.0 + t.values[0]) * (-xl);
  VectorXd ext(n + 2 * pad);
  for (int i = 0; i < n; ++i) ext[pad + i] = t.values[i];
  for (int m = 1; m <= pad; ++m) {
    ext[pad + n - 1 + m] = 1.0 - cr / (xr + m * g.dx);
    ext[pad - m] = -1.0 + cl / (-(xl - m * g.dx));
  }
  VectorXd out(n);
  for (int i = 0; i < n; ++i)
    out[i] = interp_uniform(ext, double(pad + i) + s / g.dx);
  return out;
}

bool find_zero_crossing(const BoundaryTrace& t, double& x0) {
  const int n = t.grid.nx;
  for (int i = 0; i + 1 < n; ++i) {
    const double a = t.values[i], b = t.values[i + 1];
    if (a == 0.0) {
      x0 = t.grid.x(i);
      return true;
    }
    if (a < 0.0 && b >= 0.0) {
      x0 = t.grid.x(i) + t.grid.dx * (-a) / (b - a);
      return true;
    }
  }
  return false;
}

SteadyProfile assemble_profile(const BoundaryTrace& trace_in,
                               const DoubleWellPotential& p,
                               const HalfPlaneGrid& g, double tol) {
  SteadyProfile prof;
  prof.tol = tol;
  prof.field = harmonic_extension(trace_in, g);
  VectorXd dx_tr(g.nx);
  for (int i = 1; i < g.nx - 1; ++i)
    dx_tr[i] = (trace_in.values[i + 1] - trace_in.values[i - 1]) / (2.0 * g.dx);
  dx_tr[0] = (trace_in.values[1] - trace_in.values[0]) / g.dx;
  dx_tr[g.nx - 1] =
      (trace_in.values[g.nx - 1] - trace_in.values[g.nx - 2]) / g.dx;
  prof.dx_trace = BoundaryTrace(g, std::move(dx_tr));
  prof.residual = profile_residuals(prof.field, p);
  const TailFit tf = tail_fit(trace_in);
  prof.tail_constant = tf.c;
  prof.beta = beta_constant(prof, 0.5);
  return prof;
}

}  // namespace

SteadyProfile solve_profile(const DoubleWellPotential& p,
                            const HalfPlaneGrid& g, double tol, int max_iter,
                            double initial_shift) {
  if (!(tol > 0.0)) throw ParameterError("solve_profile: tol must be > 0");
  p.validate();

  const BoundaryTrace ref = arctan_reference(g, 0.0);
  const BoundaryTrace href = half_laplacian_quadrature(ref);
  // Deviation from the fixed arctan transition; the initial guess is the
  // (optionally shifted) arctan itself.
  VectorXd w = arctan_reference(g, initial_shift).values - ref.values;

  const double dtau = 0.5 * g.dx;
  std::vector<double> history;
  double res_sup = std::numeric_limits<double>::infinity();
  // The reduced flow has a neutral translation mode; truncation asymmetry
  // slowly excites it, so the zero crossing is re-pinned to x=0 whenever
  // it drifts beyond a quarter cell.
  auto recentre = [&]() {
    BoundaryTrace tr(g, ref.values + w);
    double x0 = 0.0;
    if (find_zero_crossing(tr, x0) && std::abs(x0) > 0.25 * g.dx)
      w = shift_trace_tail_model(tr, x0) - ref.values;
  };
  for (int it = 0; it < max_iter; ++it) {
    if (it % 100 == 0) recentre();
    BoundaryTrace spec = half_laplacian_periodic(BoundaryTrace(g, w));
    VectorXd residual(g.nx);
    for (int i = 0; i < g.nx; ++i)
      residual[i] =
          href.values[i] + spec.values[i] + p.w_prime(ref.values[i] + w[i]);
    res_sup = residual.array().abs().maxCoeff();
    history.push_back(res_sup);
    if (res_sup < tol) break;
    w -= dtau * residual;
  }
  if (!(res_sup < tol))
    throw ConvergenceError(
        "solve_profile: residual " + std::to_string(res_sup) +
            " above tol after " + std::to_string(max_iter) + " iterations",
        history);

  BoundaryTrace trace_raw(g, ref.values + w);
  double x0 = 0.0;
  if (!find_zero_crossing(trace_raw, x0))
    throw ConvergenceError("solve_profile: trace has no zero crossing",
                           history);
  BoundaryTrace trace_centered(g, shift_trace_tail_model(trace_raw, x0));

  SteadyProfile prof = assemble_profile(trace_centered, p, g, tol);
  for (int i = 0; i < g.nx; ++i) {
    if (!(prof.dx_trace.values[i] > 0.0))
      throw ConvergenceError(
          "solve_profile: trace not strictly increasing at x=" +
              std::to_string(g.x(i)),
          history);
    if (!(std::abs(trace_centered.values[i]) < 1.0))
      throw ConvergenceError(
          "solve_profile: trace escaped (-1, 1) at x=" +
              std::to_string(g.x(i)),
          history);
  }
  return prof;
}

SteadyProfile closed_form_profile(const HalfPlaneGrid& g) {
  SteadyProfile prof;
  prof.tol = 0.0;
  prof.field = closed_form_phi_field(g);
  VectorXd dx_tr(g.nx);
  for (int i = 0; i < g.nx; ++i)
    dx_tr[i] = closed_form_phi(g.x(i), 0.0).dphi_dx;
  prof.dx_trace = BoundaryTrace(g, std::move(dx_tr));
  prof.residual = profile_residuals(prof.field, DoubleWellPotential::cosine());
  prof.tail_constant = tail_fit(trace(prof.field)).c;
  prof.beta = beta_constant(prof, 0.5);
  return prof;
}

TailFit tail_fit(const SteadyProfile& prof) {
  return tail_fit(trace(prof.field));
}

TailFit tail_fit(const BoundaryTrace& t) {
  const double lo = t.grid.Lx / 4.0, hi = 3.0 * t.grid.Lx / 4.0;
  std::vector<double> lx, ly;
  for (int i = 0; i < t.grid.nx; ++i) {
    const double x = t.grid.x(i);
    if (x < lo || x > hi) continue;
    const double gap = 1.0 - t.values[i];
    if (!(gap > 0.0))
      throw FitError("tail_fit: non-positive 1 - phi inside the fit window");
    lx.push_back(std::log(x));
    ly.push_back(std::log(gap));
  }
  if (lx.size() < 8) throw FitError("tail_fit: window too small");
  const LineFit lf = fit_line(Eigen::Map<VectorXd>(lx.data(), lx.size()),
                              Eigen::Map<VectorXd>(ly.data(), ly.size()));
  TailFit tf;
  tf.exponent = lf.slope;
  tf.c = std::exp(lf.intercept);
  tf.residual_rms = lf.residual_rms;
  return tf;
}

double gradient_bound_check(const SteadyProfile& prof) {
  const ScalarField& f = prof.field;
  const HalfPlaneGrid& g = f.grid();
  double sup = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      double gx, gy;
      if (i == 0)
        gx = (-3.0 * f(0, j) + 4.0 * f(1, j) - f(2, j)) / (2.0 * g.dx);
      else if (i == g.nx - 1)
        gx = (3.0 * f(i, j) - 4.0 * f(i - 1, j) + f(i - 2, j)) / (2.0 * g.dx);
      else
        gx = (f(i + 1, j) - f(i - 1, j)) / (2.0 * g.dx);
      if (j == 0)
        gy = (-3.0 * f(i, 0) + 4.0 * f(i, 1) - f(i, 2)) / (2.0 * g.dy);
      else if (j == g.ny - 1)
        gy = (3.0 * f(i, j) - 4.0 * f(i, j - 1) + f(i, j - 2)) / (2.0 * g.dy);
      else
        gy = (f(i, j + 1) - f(i, j - 1)) / (2.0 * g.dy);
      const double r = std::hypot(g.x(i), g.y(j));
      sup = std::max(sup, std::hypot(gx, gy) * (1.0 + r));
    }
  }
  return sup;
}

double beta_constant(const SteadyProfile& prof, double delta) {
  const BoundaryTrace tr = trace(prof.field);
  const int n = tr.grid.nx;
  double beta = std::numeric_limits<double>::infinity();
  bool found = false;
  for (int i = 0; i < n; ++i) {
    const double v = tr.values[i];
    if (v >= -1.0 + delta && v <= 1.0 - delta) {
      beta = std::min(beta, prof.dx_trace.values[i]);
      found = true;
    }
  }
  if (!found)
    throw BandError("beta_constant: band [-1+delta, 1-delta] contains no "
                    "grid node for delta=" +
                    std::to_string(delta));
  return beta;
}

VectorXd shift_in_x(const Eigen::Ref<const VectorXd>& v, double s_nodes) {
  const Eigen::Index n = v.size();
  VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i)
    out[i] = interp_uniform(v, double(i) + s_nodes);
  return out;
}

ScalarField shift_in_x(const ScalarField& f, double s) {
  const HalfPlaneGrid& g = f.grid();
  const double s_nodes = s / g.dx;
  ScalarField out(g);
  for (int j = 0; j < g.ny; ++j)
    out.values().col(j) = shift_in_x(f.values().col(j), -s_nodes);
  return out;
}

}  // namespace mflab
