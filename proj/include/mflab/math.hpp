#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "mflab/errors.hpp"

namespace mflab {

using Eigen::ArrayXd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// sin(pi*x) with exact zeros at integers and exact +-1 at half-integers.
// The naive std::sin(M_PI * x) misses the zeros by ~1e-16, which breaks
// the "+-1 and 0 are exact fixed points" contract of the cosine potential.
inline double sinpi(double x) {
  double r = std::remainder(x, 2.0);  // r in [-1, 1]
  if (r > 0.5) {
    r = 1.0 - r;
  } else if (r < -0.5) {
    r = -1.0 - r;
  }
  return std::sin(M_PI * r);
}

inline double cospi(double x) { return sinpi(x + 0.5); }

// Thomas algorithm for a tridiagonal system with Dirichlet data already
// eliminated. lower[i] couples x[i] to x[i-1] (lower[0] unused), upper[i]
// couples x[i] to x[i+1] (upper[n-1] unused). Overwrites rhs with the
// solution. Diagonal dominance is the caller's responsibility.
template <typename Scalar>
void solve_tridiagonal(const Eigen::Ref<const Eigen::VectorX<Scalar>>& lower,
                       Eigen::VectorX<Scalar>& diag,
                       const Eigen::Ref<const Eigen::VectorX<Scalar>>& upper,
                       Eigen::VectorX<Scalar>& rhs) {
  const Eigen::Index n = diag.size();
  for (Eigen::Index i = 1; i < n; ++i) {
    const Scalar w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (Eigen::Index i = n - 2; i >= 0; --i) {
    rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
  }
}

// Clamped cubic spline on strictly increasing nodes. Evaluates value and
// first/second derivatives; out-of-range evaluation throws RangeError.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(VectorXd x, VectorXd y, double dy_left, double dy_right);

  double value(double u) const;
  double deriv(double u) const;
  double deriv2(double u) const;

  double x_min() const { return x_.size() ? x_[0] : 0.0; }
  double x_max() const { return x_.size() ? x_[x_.size() - 1] : 0.0; }

 private:
  int locate(double u) const;
  VectorXd x_, y_, m_;  // m_ holds second derivatives at the nodes
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
};

// Ordinary least squares y ~ intercept + slope * x.
LineFit fit_line(const Eigen::Ref<const VectorXd>& x,
                 const Eigen::Ref<const VectorXd>& y);

// Golden-section minimization of a unimodal scalar function on [a, b].
template <typename F>
double golden_section_minimize(F&& f, double a, double b, double tol) {
  if (!(a < b)) throw SearchError("golden_section_minimize: invalid bracket");
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  if (!std::isfinite(f1) || !std::isfinite(f2))
    throw SearchError("golden_section_minimize: non-finite objective");
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

// Catmull-Rom interpolation of uniformly spaced samples v at fractional
// index t (in units of the spacing, relative to sample 0). Clamps to the
// end values outside the sample range.
double interp_uniform(const Eigen::Ref<const VectorXd>& v, double t);

}  // namespace mflab
