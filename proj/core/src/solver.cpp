#include "hypmin/solver.hpp"

#include "damped_newton.hpp"
#include "hypmin/errors.hpp"

#include <algorithm>
#include <cmath>

namespace hypmin {

namespace {

struct Derivatives {
  double u, ux, uy, uxx, uyy, uxy;
};

struct Partials {
  double u, ux, uy, uxx, uyy, uxy;
};

// Squared-field difference quotients, applied to v = u^2 with boundary value tau^2.
struct SquaredForms {
  double v, vx, vy, vxx, vyy, vxy;
};

double apply_squared(const LinearForm& f, const Eigen::VectorXd& u, double tau) {
  double acc = f.boundary * tau * tau;
  for (int t = 0; t < f.size; ++t) acc += f.weight[t] * u[f.col[t]] * u[f.col[t]];
  return acc;
}

Derivatives derivatives_at(const Grid& grid, int k, const Eigen::VectorXd& u, double tau) {
  const auto& st = grid.stencil(k);
  if (!grid.node(k).squared_form) {
    return {u[k],
            st.dx.apply(u, tau),
            st.dy.apply(u, tau),
            st.dxx.apply(u, tau),
            st.dyy.apply(u, tau),
            st.dxy.apply(u, tau)};
  }
  // Near the boundary u behaves like a square root of the distance while u^2
  // stays smooth, so the quotients act on u^2 and the chain rule maps back.
  const double w = u[k];
  const double vx = apply_squared(st.dx, u, tau);
  const double vy = apply_squared(st.dy, u, tau);
  const double w3 = 4.0 * w * w * w;
  return {w,
          vx / (2.0 * w),
          vy / (2.0 * w),
          apply_squared(st.dxx, u, tau) / (2.0 * w) - vx * vx / w3,
          apply_squared(st.dyy, u, tau) / (2.0 * w) - vy * vy / w3,
          apply_squared(st.dxy, u, tau) / (2.0 * w) - vx * vy / w3};
}

// In two dimensions the quasilinear part is
//   [(1 + uy^2) uxx - 2 ux uy uxy + (1 + ux^2) uyy] / (1 + ux^2 + uy^2).
double pointwise_F(const Derivatives& d, int n) {
  const double q = 1.0 + d.ux * d.ux + d.uy * d.uy;
  const double num =
      (1.0 + d.uy * d.uy) * d.uxx - 2.0 * d.ux * d.uy * d.uxy + (1.0 + d.ux * d.ux) * d.uyy;
  return num / q + n / d.u;
}

Partials pointwise_partials(const Derivatives& d, int n) {
  const double q = 1.0 + d.ux * d.ux + d.uy * d.uy;
  const double num =
      (1.0 + d.uy * d.uy) * d.uxx - 2.0 * d.ux * d.uy * d.uxy + (1.0 + d.ux * d.ux) * d.uyy;
  const double q2 = q * q;
  Partials p{};
  p.u = -n / (d.u * d.u);
  p.uxx = (1.0 + d.uy * d.uy) / q;
  p.uyy = (1.0 + d.ux * d.ux) / q;
  p.uxy = -2.0 * d.ux * d.uy / q;
  p.ux = (2.0 * d.ux * d.uyy - 2.0 * d.uy * d.uxy) / q - num * 2.0 * d.ux / q2;
  p.uy = (2.0 * d.uy * d.uxx - 2.0 * d.ux * d.uxy) / q - num * 2.0 * d.uy / q2;
  return p;
}

// Interpolation equation, scaled like a second difference:
//   (u^2 - b tau^2 - w0 u_q0^2 - w1 u_q1^2) / (u h^2).
double interpolation_residual(const Grid& grid, int k, const Eigen::VectorXd& u, double tau) {
  const auto& node = grid.node(k);
  const double h = grid.spacing();
  double g = u[k] * u[k] - node.interpolation_boundary_weight * tau * tau;
  for (int t = 0; t < 2; ++t) {
    const int q = node.interpolation_nodes[t];
    if (q >= 0) g -= node.interpolation_weights[t] * u[q] * u[q];
  }
  return g / (u[k] * h * h);
}

void require_positive(const Eigen::VectorXd& u) {
  if (u.size() > 0 && !(u.minCoeff() > 0.0)) throw SolverError("singular term undefined: u <= 0");
}

}  // namespace

std::vector<double> lift_schedule(const SolverConfig& config, double diameter) {
  const double tau_min = config.tau_min > 0.0 ? config.tau_min : 1e-3 * diameter;
  const double tau_start = config.tau_start > 0.0 ? config.tau_start : 0.1 * diameter;
  if (!(config.tau_ratio > 0.0 && config.tau_ratio < 1.0))
    throw ConfigError("tau ratio must lie in (0, 1)");
  std::vector<double> taus;
  double tau = std::max(tau_start, tau_min);
  while (tau > tau_min * (1.0 + 1e-12)) {
    taus.push_back(tau);
    tau *= config.tau_ratio;
  }
  taus.push_back(tau_min);
  return taus;
}

double Solution::interpolate(const Point& x) const {
  const auto cell = grid.cell_of(x);
  const Point corner = grid.position(cell[0], cell[1]);
  const double fx = (x.x() - corner.x()) / grid.spacing();
  const double fy = (x.y() - corner.y()) / grid.spacing();
  auto value = [&](int di, int dj) {
    const int k = grid.index_of(cell[0] + di, cell[1] + dj);
    return k >= 0 ? u[k] : tau;
  };
  return (1 - fx) * (1 - fy) * value(0, 0) + fx * (1 - fy) * value(1, 0) +
         (1 - fx) * fy * value(0, 1) + fx * fy * value(1, 1);
}

Eigen::VectorXd residual_F(const Grid& grid, const Eigen::VectorXd& u, double tau) {
  if (u.size() != grid.size()) throw ConfigError("field size does not match grid");
  require_positive(u);
  const int n = grid.domain().dimension();
  Eigen::VectorXd F(grid.size());
  for (int k = 0; k < grid.size(); ++k)
    F[k] = grid.node(k).interpolated() ? interpolation_residual(grid, k, u, tau)
                                       : pointwise_F(derivatives_at(grid, k, u, tau), n);
  return F;
}

Eigen::SparseMatrix<double> jacobian_F(const Grid& grid, const Eigen::VectorXd& u, double tau) {
  require_positive(u);
  const int n = grid.domain().dimension();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(grid.size()) * 16);
  for (int k = 0; k < grid.size(); ++k) {
    const auto& node = grid.node(k);
    if (node.interpolated()) {
      const double h2 = grid.spacing() * grid.spacing();
      const double G = interpolation_residual(grid, k, u, tau);
      triplets.emplace_back(k, k, 2.0 / h2 - G / u[k]);
      for (int t = 0; t < 2; ++t) {
        const int q = node.interpolation_nodes[t];
        if (q >= 0)
          triplets.emplace_back(k, q, -2.0 * node.interpolation_weights[t] * u[q] / (u[k] * h2));
      }
      continue;
    }
    const auto& st = grid.stencil(k);
    const Derivatives d = derivatives_at(grid, k, u, tau);
    const Partials p = pointwise_partials(d, n);
    if (!node.squared_form) {
      auto push = [&](const LinearForm& f, double coeff) {
        for (int t = 0; t < f.size; ++t) triplets.emplace_back(k, f.col[t], coeff * f.weight[t]);
      };
      triplets.emplace_back(k, k, p.u);
      push(st.dx, p.ux);
      push(st.dy, p.uy);
      push(st.dxx, p.uxx);
      push(st.dyy, p.uyy);
      push(st.dxy, p.uxy);
      continue;
    }
    // Chain rule through v = u^2: first the partials with respect to the
    // squared-field quotients, then d v_j / d u_j = 2 u_j.
    const double w = u[k];
    const double vx = 2.0 * w * d.ux;
    const double vy = 2.0 * w * d.uy;
    const double w2 = w * w, w3 = w2 * w, w4 = w2 * w2;
    const double vxx = 2.0 * w * d.uxx + vx * vx / (2.0 * w2);
    const double vyy = 2.0 * w * d.uyy + vy * vy / (2.0 * w2);
    const double vxy = 2.0 * w * d.uxy + vx * vy / (2.0 * w2);
    const double g_vxx = p.uxx / (2.0 * w);
    const double g_vyy = p.uyy / (2.0 * w);
    const double g_vxy = p.uxy / (2.0 * w);
    const double g_vx = p.ux / (2.0 * w) - p.uxx * vx / (2.0 * w3) - p.uxy * vy / (4.0 * w3);
    const double g_vy = p.uy / (2.0 * w) - p.uyy * vy / (2.0 * w3) - p.uxy * vx / (4.0 * w3);
    const double g_w = p.u - p.ux * vx / (2.0 * w2) - p.uy * vy / (2.0 * w2) +
                       p.uxx * (-vxx / (2.0 * w2) + 3.0 * vx * vx / (4.0 * w4)) +
                       p.uyy * (-vyy / (2.0 * w2) + 3.0 * vy * vy / (4.0 * w4)) +
                       p.uxy * (-vxy / (2.0 * w2) + 3.0 * vx * vy / (4.0 * w4));
    auto push = [&](const LinearForm& f, double coeff) {
      for (int t = 0; t < f.size; ++t)
        triplets.emplace_back(k, f.col[t], coeff * f.weight[t] * 2.0 * u[f.col[t]]);
    };
    triplets.emplace_back(k, k, g_w);
    push(st.dx, g_vx);
    push(st.dy, g_vy);
    push(st.dxx, g_vxx);
    push(st.dyy, g_vyy);
    push(st.dxy, g_vxy);
  }
  Eigen::SparseMatrix<double> J(grid.size(), grid.size());
  J.setFromTriplets(triplets.begin(), triplets.end());
  J.makeCompressed();
  return J;
}

namespace {
constexpr int kMaxRestarts = 6;
}

Solution newton_solve(const Grid& grid, const SolverConfig& config) {
  if (!(config.residual_rtol > 0.0) || config.max_newton < 1 || !(config.backtrack > 0.0) ||
      !(config.backtrack < 1.0) || config.max_backtracks < 0)
    throw ConfigError("invalid solver configuration");
  const int n = grid.domain().dimension();
  if (n != 2)
    throw ConfigError("the grid solver is planar (n = 2); use solve_radial for balls with n >= 3");
  const auto taus = lift_schedule(config, grid.diameter());

  // Start from the lifted exterior-sphere ball solution.
  const double radius =
      exterior_sphere_radius(grid.domain(), 256).value_or(grid.diameter());
  auto initial_guess = [&](double tau) {
    Eigen::VectorXd u0(grid.size());
    for (int k = 0; k < grid.size(); ++k) {
      const double d = std::min(grid.node(k).boundary_distance, radius);
      u0[k] = std::sqrt(2.0 * radius * d - d * d + tau * tau);
    }
    return u0;
  };

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  bool analyzed = false;
  std::vector<StageRecord> stages;
  auto run_stage = [&](Eigen::VectorXd& u, double tau) {
    auto rec = detail::damped_newton_stage(
        u, tau, config.residual_rtol * n / tau, config, lu, analyzed, stages,
        [&](const Eigen::VectorXd& v) { return residual_F(grid, v, tau); },
        [&](const Eigen::VectorXd& v) { return jacobian_F(grid, v, tau); });
    if (config.keep_stage_fields) rec.u = u;
    stages.push_back(std::move(rec));
  };
  // Predictor: u^2 - tau^2 is carried over between stages, which is exact
  // for the ball and keeps u near tau on the cut cells.
  auto predict = [](const Eigen::VectorXd& u, double from, double to) {
    const Eigen::VectorXd v =
        (u.array().square() + (to * to - from * from)).max(to * to).sqrt().matrix();
    return v;
  };

  // A failed first stage restarts from a doubled lift; a failed later stage
  // is retried after inserting the geometric mean of the two lifts.
  Eigen::VectorXd u;
  double tau_done = 0.0;
  for (int attempt = 0;; ++attempt) {
    double tau0 = taus.front() * std::pow(2.0, attempt);
    try {
      u = initial_guess(tau0);
      run_stage(u, tau0);
      tau_done = tau0;
      break;
    } catch (const SolverError&) {
      if (attempt == kMaxRestarts) throw;
    }
  }
  std::vector<double> pending(taus.rbegin(), taus.rend());
  if (tau_done == pending.back()) pending.pop_back();
  int inserted = 0;
  while (!pending.empty()) {
    const double tau = pending.back();
    Eigen::VectorXd trial = predict(u, tau_done, tau);
    try {
      run_stage(trial, tau);
    } catch (const SolverError&) {
      if (inserted == kMaxRestarts) throw;
      ++inserted;
      pending.push_back(std::sqrt(tau * tau_done));
      continue;
    }
    u = std::move(trial);
    tau_done = tau;
    pending.pop_back();
  }

  Solution sol{grid, std::move(u), taus.back(), stages.back().residual, stages.back().tolerance,
               std::move(stages)};
  return sol;
}

double exact_ball_solution(double radius, double r) {
  if (std::abs(r) > radius) throw GeometryError("point outside the ball");
  return std::sqrt(std::max(0.0, radius * radius - r * r));
}

double exact_ball_solution(double radius, const Point& x) {
  return exact_ball_solution(radius, x.norm());
}

double lifted_ball_solution(double radius, double tau, double r) {
  if (std::abs(r) > radius) throw GeometryError("point outside the ball");
  return std::sqrt(radius * radius + tau * tau - r * r);
}

}  // namespace hypmin
