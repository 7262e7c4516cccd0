#include "hypmin/radial.hpp"

#include "damped_newton.hpp"
#include "hypmin/errors.hpp"

#include <algorithm>
#include <cmath>

namespace hypmin {

namespace {

struct RadialOperator {
  const std::vector<double>& r;
  int n;
  double tau;

  // Unknowns are u[0..N-1]; u[N] = tau.
  double at(const Eigen::VectorXd& u, int i) const {
    return i < u.size() ? u[i] : tau;
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& u) const {
    const int m = static_cast<int>(u.size());
    Eigen::VectorXd F(m);
    // At the center u_r / r -> u_rr, so the equation reads n u_rr + n / u = 0.
    F[0] = n * 2.0 * (at(u, 1) - u[0]) / (r[1] * r[1]) + n / u[0];
    for (int i = 1; i < m; ++i) {
      const double hm = r[i] - r[i - 1], hp = r[i + 1] - r[i];
      const double den = hp * hm * (hp + hm);
      const double um = u[i - 1], u0 = u[i], up = at(u, i + 1);
      const double ur = (hm * hm * up - hp * hp * um + (hp * hp - hm * hm) * u0) / den;
      const double urr = 2.0 * (hm * up - (hp + hm) * u0 + hp * um) / den;
      F[i] = (n - 1) * ur / r[i] + urr / (1.0 + ur * ur) + n / u0;
    }
    return F;
  }

  Eigen::SparseMatrix<double> jacobian(const Eigen::VectorXd& u) const {
    const int m = static_cast<int>(u.size());
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(3 * static_cast<std::size_t>(m));
    const double c0 = 2.0 * n / (r[1] * r[1]);
    t.emplace_back(0, 0, -c0 - n / (u[0] * u[0]));
    if (m > 1) t.emplace_back(0, 1, c0);
    for (int i = 1; i < m; ++i) {
      const double hm = r[i] - r[i - 1], hp = r[i + 1] - r[i];
      const double den = hp * hm * (hp + hm);
      const double um = u[i - 1], u0 = u[i], up = at(u, i + 1);
      const double ur = (hm * hm * up - hp * hp * um + (hp * hp - hm * hm) * u0) / den;
      const double urr = 2.0 * (hm * up - (hp + hm) * u0 + hp * um) / den;
      const double q = 1.0 + ur * ur;
      const double d_ur = (n - 1) / r[i] - urr * 2.0 * ur / (q * q);
      const double d_urr = 1.0 / q;
      const double wp_r = hm * hm / den, wm_r = -hp * hp / den, w0_r = (hp * hp - hm * hm) / den;
      const double wp_rr = 2.0 * hm / den, wm_rr = 2.0 * hp / den, w0_rr = -2.0 * (hp + hm) / den;
      t.emplace_back(i, i - 1, d_ur * wm_r + d_urr * wm_rr);
      t.emplace_back(i, i, d_ur * w0_r + d_urr * w0_rr - n / (u0 * u0));
      if (i + 1 < m) t.emplace_back(i, i + 1, d_ur * wp_r + d_urr * wp_rr);
    }
    Eigen::SparseMatrix<double> J(m, m);
    J.setFromTriplets(t.begin(), t.end());
    J.makeCompressed();
    return J;
  }
};

}  // namespace

double RadialProfile::value(double rq) const {
  if (rq < 0.0 || rq > radius) throw GeometryError("radius outside the profile");
  const auto it = std::upper_bound(r.begin(), r.end(), rq);
  if (it == r.end()) return u.back();
  const auto i = static_cast<std::size_t>(it - r.begin());
  const double w = (rq - r[i - 1]) / (r[i] - r[i - 1]);
  return (1.0 - w) * u[i - 1] + w * u[i];
}

RadialProfile solve_radial(double radius, int n, const RadialConfig& config) {
  if (!(radius > 0.0)) throw ConfigError("radius must be positive");
  if (n < 2) throw ConfigError("dimension must be at least 2");
  if (config.intervals < 512) throw ConfigError("radial solve needs at least 512 intervals");

  const int N = config.intervals;
  RadialProfile out;
  out.n = n;
  out.radius = radius;
  // Quadratic grading toward r = R, where u behaves like sqrt(R - r).
  out.r.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    const double s = 1.0 - static_cast<double>(i) / N;
    out.r[i] = radius * (1.0 - s * s);
  }
  out.r[N] = radius;

  const auto taus = lift_schedule(config.solver, 2.0 * radius);
  Eigen::VectorXd u(N);
  for (int i = 0; i < N; ++i)
    u[i] = std::sqrt(taus.front() * taus.front() + radius * radius - out.r[i] * out.r[i]);

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  bool analyzed = false;
  double previous_tau = taus.front();
  for (double tau : taus) {
    if (tau != previous_tau) {
      const double shift = tau * tau - previous_tau * previous_tau;
      u = (u.array().square() + shift).max(tau * tau).sqrt().matrix();
      previous_tau = tau;
    }
    const RadialOperator op{out.r, n, tau};
    auto rec = detail::damped_newton_stage(
        u, tau, config.solver.residual_rtol * n / tau, config.solver, lu, analyzed, out.stages,
        [&](const Eigen::VectorXd& v) { return op.residual(v); },
        [&](const Eigen::VectorXd& v) { return op.jacobian(v); });
    if (config.solver.keep_stage_fields) rec.u = u;
    out.stages.push_back(std::move(rec));
  }

  out.tau = taus.back();
  out.u.assign(u.data(), u.data() + N);
  out.u.push_back(out.tau);
  out.u_r.assign(N + 1, 0.0);
  for (int i = 1; i < N; ++i) {
    const double hm = out.r[i] - out.r[i - 1], hp = out.r[i + 1] - out.r[i];
    out.u_r[i] = (hm * hm * out.u[i + 1] - hp * hp * out.u[i - 1] +
                  (hp * hp - hm * hm) * out.u[i]) /
                 (hp * hm * (hp + hm));
  }
  const double hl = out.r[N] - out.r[N - 1];
  out.u_r[N] = (out.u[N] - out.u[N - 1]) / hl;
  return out;
}

double radial_residual(double radius, int n, double r) {
  if (!(radius > 0.0)) throw ConfigError("radius must be positive");
  if (!(r > 0.0 && r < radius)) throw GeometryError("radial identity is singular at the endpoints");
  const double U = std::sqrt(radius * radius - r * r);
  const double Ur = -r / U;
  const double Urr = -radius * radius / (U * U * U);
  return (n - 1) * Ur / r + Urr / (1.0 + Ur * Ur) + n / U;
}

}  // namespace hypmin
