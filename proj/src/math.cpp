#include "mflab/math.hpp"

namespace mflab {

CubicSpline::CubicSpline(VectorXd x, VectorXd y, double dy_left,
                         double dy_right)
    : x_(std::move(x)), y_(std::move(y)) {
  const Eigen::Index n = x_.size();
  if (n < 3 || y_.size() != n)
    throw FormatError("CubicSpline: need at least 3 matching samples");
  for (Eigen::Index i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1]))
      throw FormatError("CubicSpline: abscissae must be strictly increasing");

  // Solve for nodal second derivatives with clamped end slopes.
  VectorXd lower = VectorXd::Zero(n), diag(n), upper = VectorXd::Zero(n),
           rhs(n);
  const double h0 = x_[1] - x_[0];
  const double hn = x_[n - 1] - x_[n - 2];
  diag[0] = 2.0 * h0;
  upper[0] = h0;
  rhs[0] = 6.0 * ((y_[1] - y_[0]) / h0 - dy_left);
  for (Eigen::Index i = 1; i < n - 1; ++i) {
    const double ha = x_[i] - x_[i - 1];
    const double hb = x_[i + 1] - x_[i];
    lower[i] = ha;
    diag[i] = 2.0 * (ha + hb);
    upper[i] = hb;
    rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / hb - (y_[i] - y_[i - 1]) / ha);
  }
  lower[n - 1] = hn;
  diag[n - 1] = 2.0 * hn;
  rhs[n - 1] = 6.0 * (dy_right - (y_[n - 1] - y_[n - 2]) / hn);
  solve_tridiagonal<double>(lower, diag, upper, rhs);
  m_ = rhs;
}

int CubicSpline::locate(double u) const {
  const Eigen::Index n = x_.size();
  if (u < x_[0] || u > x_[n - 1])
    throw RangeError("CubicSpline: evaluation outside sampled range");
  Eigen::Index lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const Eigen::Index mid = (lo + hi) / 2;
    (x_[mid] <= u ? lo : hi) = mid;
  }
  return static_cast<int>(lo);
}

double CubicSpline::value(double u) const {
  const int i = locate(u);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - u) / h;
  const double b = (u - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::deriv(double u) const {
  const int i = locate(u);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - u) / h;
  const double b = (u - x_[i]) / h;
  return (y_[i + 1] - y_[i]) / h +
         h / 6.0 *
             ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]);
}

double CubicSpline::deriv2(double u) const {
  const int i = locate(u);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - u) / h;
  const double b = (u - x_[i]) / h;
  return a * m_[i] + b * m_[i + 1];
}

LineFit fit_line(const Eigen::Ref<const VectorXd>& x,
                 const Eigen::Ref<const VectorXd>& y) {
  const Eigen::Index n = x.size();
  if (n < 2 || y.size() != n) throw FitError("fit_line: need >= 2 samples");
  const double xm = x.mean();
  const double ym = y.mean();
  const double sxx = (x.array() - xm).square().sum();
  if (sxx <= 0.0) throw FitError("fit_line: degenerate abscissae");
  const double sxy = ((x.array() - xm) * (y.array() - ym)).sum();
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * xm;
  fit.residual_rms = std::sqrt(
      (y.array() - fit.intercept - fit.slope * x.array()).square().mean());
  return fit;
}

double interp_uniform(const Eigen::Ref<const VectorXd>& v, double t) {
  const Eigen::Index n = v.size();
  if (n == 0) throw DimensionError("interp_uniform: empty samples");
  if (t <= 0.0) return v[0];
  if (t >= double(n - 1)) return v[n - 1];
  const Eigen::Index i = static_cast<Eigen::Index>(std::floor(t));
  const double s = t - double(i);
  if (s == 0.0) return v[i];
  const double p0 = (i > 0) ? v[i - 1] : v[0];
  const double p1 = v[i];
  const double p2 = v[i + 1];
  const double p3 = (i + 2 < n) ? v[i + 2] : v[n - 1];
  // Catmull-Rom
  return p1 + 0.5 * s *
                  (p2 - p0 +
                   s * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                        s * (3.0 * (p1 - p2) + p3 - p0)));
}

}  // namespace mflab
