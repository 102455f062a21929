#pragma once

#include <optional>
#include <string>
#include <utility>

#include "mflab/math.hpp"

namespace mflab {

enum class PotentialKind { Cosine, UserTabulated };

// Interfacial misfit potential with equal wells at u = -1 and u = +1.
//
// Cosine is W(u) = (1/pi^2)(1 + cos(pi u)); UserTabulated interpolates
// sampled (u, W) pairs with a clamped cubic spline and is only defined on
// the sampled range.
class DoubleWellPotential {
 public:
  static DoubleWellPotential cosine();
  static DoubleWellPotential tabulated(VectorXd u, VectorXd w);
  // Two-column CSV (u, W) with a header line; u strictly increasing.
  static DoubleWellPotential from_csv(const std::string& path);

  double w(double u) const;
  double w_prime(double u) const;
  double w_double_prime(double u) const;

  PotentialKind kind() const { return kind_; }
  std::pair<double, double> wells() const { return {-1.0, 1.0}; }
  // Evaluable range: [-inf, inf] for Cosine, the sampled range otherwise.
  std::pair<double, double> range() const;
  // Largest |W''| over the evaluable range (sampled for tabulated
  // potentials); used by the explicit-scheme stability check.
  double max_abs_w2() const;

  // Checks the double-well normalization: W(1) = W(-1), W > W(+-1) inside
  // (-1, 1), W'(+-1) = 0, W''(+-1) > 0, W'(0) = 0. Throws RangeError with
  // the violated condition.
  void validate(double tol = 1e-6) const;

 private:
  DoubleWellPotential() = default;
  PotentialKind kind_ = PotentialKind::Cosine;
  CubicSpline spline_;
};

// Structural constants of the well neighborhoods:
//   mu: W'(phi+q) - W'(phi) >= mu q near the right well (and mirrored near
//       the left well), for phi within delta of the well and 0 < q <= delta;
//   k:  |W'(phi-q) - W'(phi)| <= k q on the transition band
//       phi in [-1+delta, 1-delta], 0 < q <= delta.
struct PotentialConstants {
  double mu = 0.0;
  double delta = 0.0;
  double k = 0.0;
  // Smallest perturbation sampled; the inequalities are certified for
  // q in [q_floor, delta]. At a borderline delta (W'' vanishing at the
  // band edge) the q -> 0 limit of the secant quotient is 0, so a floor
  // is part of the certificate.
  double q_floor = 0.0;
};

// Brute-force grid estimate of (mu, k) for the given delta, with a 10%
// safety margin (mu shrunk, k inflated), re-verified on a 10x finer grid
// over the same closed sampling regions. Throws ConstantsError with the
// violating (phi, q) pair when no positive mu exists.
PotentialConstants estimate_constants(const DoubleWellPotential& p,
                                      double delta, int n_grid = 400);

// Re-checks the defining inequalities of a PotentialConstants on a grid
// with n_grid points per axis; returns the worst signed margin (>= 0 means
// all inequalities hold) and the location of the worst pair.
struct ConstantsCheck {
  double worst_margin = 0.0;
  double phi = 0.0;
  double q = 0.0;
};
ConstantsCheck verify_constants(const DoubleWellPotential& p,
                                const PotentialConstants& c, int n_grid);

}  // namespace mflab
