#pragma once

#include "hypmin/errors.hpp"
#include "hypmin/solver.hpp"

#include <Eigen/SparseLU>

#include <sstream>
#include <string>
#include <vector>

namespace hypmin::detail {

inline constexpr double kStepRtol = 1e-10;

inline std::string describe_failure(const std::vector<StageRecord>& done, double tau,
                                    int iterations, const std::vector<double>& history) {
  std::ostringstream out;
  out << "completed stages:";
  for (const auto& s : done)
    out << " [tau=" << s.tau << " it=" << s.iterations << " res=" << s.residual << "]";
  out << "; failing stage tau=" << tau << " after " << iterations << " iterations, residuals:";
  for (double r : history) out << ' ' << r;
  return out.str();
}

/// Damped Newton for one continuation stage. `residual(u)` returns F and
/// `jacobian(u)` the sparse Jacobian; iterates stay strictly positive.
template <class Residual, class Jacobian>
StageRecord damped_newton_stage(
    Eigen::VectorXd& u, double tau, double tol, const SolverConfig& config,
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>& lu,
    bool& analyzed, const std::vector<StageRecord>& done, Residual&& residual,
    Jacobian&& jacobian) {
  Eigen::VectorXd F = residual(u);
  double res = F.lpNorm<Eigen::Infinity>();
  std::vector<double> history{res};
  int it = 0;
  while (res > tol) {
    if (it == config.max_newton)
      throw SolverError("Newton did not converge: " + describe_failure(done, tau, it, history));
    const Eigen::SparseMatrix<double> J = jacobian(u);
    if (!analyzed) {
      lu.analyzePattern(J);
      analyzed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success)
      throw SolverError("Jacobian factorization failed: " +
                        describe_failure(done, tau, it, history));
    Eigen::VectorXd delta = lu.solve(-F);
    for (int refine = 0; refine < 3; ++refine) {
      const Eigen::VectorXd r = J * delta + F;
      if (r.norm() <= config.linear_rtol * F.norm()) break;
      delta -= lu.solve(r);
    }
    // On strongly graded meshes the residual has a rounding floor above the
    // tolerance; a correction this small cannot move u by anything meaningful.
    if (delta.lpNorm<Eigen::Infinity>() <= kStepRtol * u.lpNorm<Eigen::Infinity>()) {
      return StageRecord{.tau = tau, .iterations = it, .residual = res, .tolerance = tol,
                         .step_converged = true, .u = std::nullopt};
    }

    const double f0 = F.norm();
    double alpha = 1.0;
    bool accepted = false;
    for (int bt = 0; bt <= config.max_backtracks; ++bt) {
      Eigen::VectorXd trial = u + alpha * delta;
      if (trial.minCoeff() > 0.0) {
        Eigen::VectorXd Ft = residual(trial);
        if (Ft.norm() <= (1.0 - 1e-4 * alpha) * f0) {
          u = std::move(trial);
          F = std::move(Ft);
          accepted = true;
          break;
        }
      }
      alpha *= config.backtrack;
    }
    ++it;
    if (!accepted) {
      throw SolverError("line search reached the damping floor: " +
                        describe_failure(done, tau, it, history));
    }
    res = F.lpNorm<Eigen::Infinity>();
    history.push_back(res);
  }
  return StageRecord{.tau = tau, .iterations = it, .residual = res, .tolerance = tol,
                     .step_converged = false, .u = std::nullopt};
}

}  // namespace hypmin::detail
