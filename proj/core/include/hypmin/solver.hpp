#pragma once

#include "hypmin/grid.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <optional>
#include <vector>

namespace hypmin {

/// Continuation and Newton controls. Zero-valued lifts are resolved against
/// the domain diameter (tau_start = 0.1 d, tau_min = 1e-3 d).
struct SolverConfig {
  double tau_start = 0.0;
  double tau_min = 0.0;
  double tau_ratio = 0.5;
  double residual_rtol = 1e-10;  ///< stage tolerance is residual_rtol * n / tau
  int max_newton = 50;
  double backtrack = 0.5;
  int max_backtracks = 40;
  double linear_rtol = 1e-12;
  bool keep_stage_fields = false;
};

/// tau_0 > tau_1 > ... > tau_K = tau_min, geometric with the configured ratio.
std::vector<double> lift_schedule(const SolverConfig& config, double diameter);

struct StageRecord {
  double tau = 0.0;
  int iterations = 0;
  double residual = 0.0;
  double tolerance = 0.0;
  /// Stopped because the Newton correction fell below 1e-10 max|u| while the
  /// residual sat at its rounding floor.
  bool step_converged = false;
  std::optional<Eigen::VectorXd> u;  ///< kept only with keep_stage_fields
};

struct Solution {
  Grid grid;
  Eigen::VectorXd u;
  double tau = 0.0;        ///< final boundary lift
  double residual = 0.0;   ///< max-norm of discrete F[u]
  double tolerance = 0.0;  ///< residual tolerance of the final stage
  std::vector<StageRecord> stages;

  int dimension() const { return grid.domain().dimension(); }
  /// Bilinear interpolation of u; lattice points outside the interior mask
  /// take the boundary lift.
  double interpolate(const Point& x) const;
};

/// Discrete F[u] = Delta u - u_i u_j u_ij / (1 + |grad u|^2) + n / u at every
/// interior node, with boundary value tau on the cut-cell arms.
Eigen::VectorXd residual_F(const Grid& grid, const Eigen::VectorXd& u, double tau);

/// Jacobian of residual_F with respect to the nodal values.
Eigen::SparseMatrix<double> jacobian_F(const Grid& grid, const Eigen::VectorXd& u, double tau);

Solution newton_solve(const Grid& grid, const SolverConfig& config = {});

/// sqrt(R^2 - |x|^2) on the ball of radius R centered at the origin.
double exact_ball_solution(double radius, const Point& x);
double exact_ball_solution(double radius, double r);
/// Ball solution with boundary value tau: sqrt(R^2 + tau^2 - r^2).
double lifted_ball_solution(double radius, double tau, double r);

}  // namespace hypmin
