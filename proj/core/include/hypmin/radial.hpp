#pragma once

#include "hypmin/solver.hpp"

#include <vector>

namespace hypmin {

/// Rotationally symmetric solution on the ball of radius R in dimension n.
struct RadialProfile {
  int n = 2;
  double radius = 0.0;
  double tau = 0.0;
  std::vector<double> r;    ///< graded nodes, r[0] = 0, r.back() = R
  std::vector<double> u;
  std::vector<double> u_r;  ///< three-point derivative, zero at the center
  std::vector<StageRecord> stages;

  /// Piecewise-linear interpolation of u on [0, R].
  double value(double radius_query) const;
};

struct RadialConfig {
  SolverConfig solver;
  int intervals = 2048;  ///< at least 512
};

/// Solves (n-1) u_r / r + u_rr / (1 + u_r^2) + n / u = 0 on [0, R] with
/// u'(0) = 0 and u(R) = tau_min, continuing in tau as the grid solver does.
RadialProfile solve_radial(double radius, int n, const RadialConfig& config = {});

/// Left side of the radial equation evaluated on sqrt(R^2 - r^2) through its
/// closed-form derivatives. Requires 0 < r < R.
double radial_residual(double radius, int n, double r);

}  // namespace hypmin
