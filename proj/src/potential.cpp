#include "mflab/potential.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace mflab {

DoubleWellPotential DoubleWellPotential::cosine() {
  DoubleWellPotential p;
  p.kind_ = PotentialKind::Cosine;
  return p;
}

DoubleWellPotential DoubleWellPotential::tabulated(VectorXd u, VectorXd w) {
  DoubleWellPotential p;
  p.kind_ = PotentialKind::UserTabulated;
  // Clamped ends with slopes from one-sided second-order differences keep
  // the interpolant honest at the sample boundary.
  const Eigen::Index n = u.size();
  if (n < 5) throw FormatError("tabulated potential: need >= 5 samples");
  // Clamp slopes from a parabola through the first/last three samples.
  auto parabola_slope = [&](Eigen::Index a, Eigen::Index b, Eigen::Index c,
                            double at) {
    const double xa = u[a], xb = u[b], xc = u[c];
    const double ya = w[a], yb = w[b], yc = w[c];
    const double d1 = (yb - ya) / (xb - xa);
    const double d2 = (yc - yb) / (xc - xb);
    const double second = (d2 - d1) / (xc - xa);
    return d1 + second * (2.0 * at - xa - xb);
  };
  const double sl = parabola_slope(0, 1, 2, u[0]);
  const double sr = parabola_slope(n - 3, n - 2, n - 1, u[n - 1]);
  p.spline_ = CubicSpline(std::move(u), std::move(w), sl, sr);
  return p;
}

DoubleWellPotential DoubleWellPotential::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("potential CSV: cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw FormatError("potential CSV: missing header line");
  std::vector<double> us, ws;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b))
      throw FormatError("potential CSV: malformed row at line " +
                        std::to_string(lineno));
    try {
      us.push_back(std::stod(a));
      ws.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw FormatError("potential CSV: non-numeric entry at line " +
                        std::to_string(lineno));
    }
  }
  VectorXd u = Eigen::Map<VectorXd>(us.data(), us.size());
  VectorXd w = Eigen::Map<VectorXd>(ws.data(), ws.size());
  for (Eigen::Index i = 1; i < u.size(); ++i)
    if (!(u[i] > u[i - 1]))
      throw FormatError("potential CSV: u column must be strictly increasing");
  return tabulated(std::move(u), std::move(w));
}

double DoubleWellPotential::w(double u) const {
  if (kind_ == PotentialKind::Cosine)
    return (1.0 + cospi(u)) / (M_PI * M_PI);
  return spline_.value(u);
}

double DoubleWellPotential::w_prime(double u) const {
  if (kind_ == PotentialKind::Cosine) return -sinpi(u) / M_PI;
  return spline_.deriv(u);
}

double DoubleWellPotential::w_double_prime(double u) const {
  if (kind_ == PotentialKind::Cosine) return -cospi(u);
  return spline_.deriv2(u);
}

std::pair<double, double> DoubleWellPotential::range() const {
  if (kind_ == PotentialKind::Cosine)
    return {-std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
  return {spline_.x_min(), spline_.x_max()};
}

double DoubleWellPotential::max_abs_w2() const {
  if (kind_ == PotentialKind::Cosine) return 1.0;
  double m = 0.0;
  const auto [lo, hi] = range();
  const int n = 2000;
  for (int i = 0; i <= n; ++i) {
    const double u = lo + (hi - lo) * i / n;
    m = std::max(m, std::abs(spline_.deriv2(u)));
  }
  return m;
}

void DoubleWellPotential::validate(double tol) const {
  const auto [lo, hi] = range();
  if (lo > -1.0 || hi < 1.0)
    throw RangeError("potential: sampled range must cover [-1, 1]");
  if (std::abs(w(1.0) - w(-1.0)) > tol)
    throw RangeError("potential: W(1) != W(-1)");
  if (std::abs(w_prime(1.0)) > tol || std::abs(w_prime(-1.0)) > tol)
    throw RangeError("potential: W'(+-1) != 0");
  if (!(w_double_prime(1.0) > 0.0) || !(w_double_prime(-1.0) > 0.0))
    throw RangeError("potential: wells degenerate, W''(+-1) <= 0");
  if (std::abs(w_prime(0.0)) > tol)
    throw RangeError("potential: W'(0) != 0");
  const double wmin = w(1.0);
  for (int i = 1; i < 400; ++i) {
    const double u = -1.0 + 2.0 * i / 400.0;
    if (!(w(u) > wmin - tol))
      throw RangeError("potential: W(u) not above the well value inside "
                       "(-1,1) at u=" +
                       std::to_string(u));
  }
}

namespace {

// Smallest secant slope of W' over the two well regions. Region A probes
// the right well with upward bumps, region B mirrors it at the left well
// with downward bumps, so both secants stay inside the convexity basins.
struct QuotientScan {
  double min_quotient = std::numeric_limits<double>::infinity();
  double phi = 0.0, q = 0.0;
};

QuotientScan scan_mu(const DoubleWellPotential& p, double delta, double q_lo,
                     int n) {
  QuotientScan s;
  auto consider = [&](double phi, double q, double quotient) {
    if (quotient < s.min_quotient) {
      s.min_quotient = quotient;
      s.phi = phi;
      s.q = q;
    }
  };
  for (int i = 0; i <= n; ++i) {
    const double phi_r = 1.0 - delta + delta * i / n;  // [1-delta, 1]
    const double phi_l = -1.0 + delta * i / n;         // [-1, -1+delta]
    for (int j = 0; j <= n; ++j) {
      const double q = q_lo + (delta - q_lo) * j / n;
      consider(phi_r, q, (p.w_prime(phi_r + q) - p.w_prime(phi_r)) / q);
      consider(phi_l, q, (p.w_prime(phi_l) - p.w_prime(phi_l - q)) / q);
    }
  }
  return s;
}

double scan_k(const DoubleWellPotential& p, double delta, double q_lo, int n) {
  double k = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double phi = -1.0 + delta + (2.0 - 2.0 * delta) * i / n;
    for (int j = 0; j <= n; ++j) {
      const double q = q_lo + (delta - q_lo) * j / n;
      k = std::max(k, std::abs(p.w_prime(phi - q) - p.w_prime(phi)) / q);
    }
  }
  return k;
}

}  // namespace

PotentialConstants estimate_constants(const DoubleWellPotential& p,
                                      double delta, int n_grid) {
  if (!(delta > 0.0 && delta < 1.0))
    throw ParameterError("estimate_constants: delta must be in (0, 1)");
  if (!(p.w_double_prime(1.0) > 0.0) || !(p.w_double_prime(-1.0) > 0.0))
    throw ParameterError("estimate_constants: degenerate wells");
  const auto [lo, hi] = p.range();
  if (lo > -1.0 - delta || hi < 1.0 + delta)
    throw RangeError(
        "estimate_constants: potential range must cover [-1-delta, 1+delta]");

  const double q_floor = delta / n_grid;
  const QuotientScan s = scan_mu(p, delta, q_floor, n_grid);
  if (!(s.min_quotient > 0.0))
    throw ConstantsError(
        "estimate_constants: no positive mu for delta=" +
            std::to_string(delta) + "; violating pair phi=" +
            std::to_string(s.phi) + ", q=" + std::to_string(s.q) +
            " has quotient " + std::to_string(s.min_quotient),
        s.phi, s.q);

  PotentialConstants c;
  c.delta = delta;
  c.q_floor = q_floor;
  c.mu = 0.9 * s.min_quotient;
  c.k = 1.1 * scan_k(p, delta, q_floor, n_grid);

  const ConstantsCheck check = verify_constants(p, c, 10 * n_grid);
  if (check.worst_margin < 0.0)
    throw ConstantsError(
        "estimate_constants: re-verification failed at phi=" +
            std::to_string(check.phi) + ", q=" + std::to_string(check.q),
        check.phi, check.q);
  return c;
}

ConstantsCheck verify_constants(const DoubleWellPotential& p,
                                const PotentialConstants& c, int n_grid) {
  ConstantsCheck worst;
  worst.worst_margin = std::numeric_limits<double>::infinity();
  auto consider = [&](double margin, double phi, double q) {
    if (margin < worst.worst_margin) {
      worst.worst_margin = margin;
      worst.phi = phi;
      worst.q = q;
    }
  };
  const double delta = c.delta;
  const double q_lo = c.q_floor > 0.0 ? c.q_floor : delta / n_grid;
  const int n = n_grid;
  for (int i = 0; i <= n; ++i) {
    const double phi_r = 1.0 - delta + delta * i / n;
    const double phi_l = -1.0 + delta * i / n;
    const double phi_b = -1.0 + delta + (2.0 - 2.0 * delta) * i / n;
    for (int j = 0; j <= n; ++j) {
      const double q = q_lo + (delta - q_lo) * j / n;
      consider(p.w_prime(phi_r + q) - p.w_prime(phi_r) - c.mu * q, phi_r, q);
      consider(p.w_prime(phi_l) - p.w_prime(phi_l - q) - c.mu * q, phi_l, q);
      consider(c.k * q - std::abs(p.w_prime(phi_b - q) - p.w_prime(phi_b)),
               phi_b, q);
    }
  }
  return worst;
}

}  // namespace mflab
