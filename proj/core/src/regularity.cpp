#include "hypmin/regularity.hpp"

#include "hypmin/errors.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace hypmin {

ProfileWindow default_window(const Solution& solution) {
  ProfileWindow w;
  w.d_min = std::max(10.0 * solution.tau, 2.0 * solution.grid.spacing());
  w.d_max = std::min(0.2 * solution.grid.diameter(), 8.0 * w.d_min);
  return w;
}

BoundaryProfile extract_profile_along(const Solution& solution, const Point& anchor,
                                      const Point& direction, int m, ProfileWindow window) {
  if (m < 1) throw ConfigError("profile needs at least one sample");
  const auto& domain = solution.grid.domain();
  const Point dir = direction.normalized();
  const double nudge = 1e-9 * domain.extent();
  const double reach = ray_exit(domain, anchor + nudge * dir, dir) + nudge;
  window.d_max = std::min(window.d_max, 0.5 * reach);
  if (!(window.d_min > 0.0) || !(window.d_min < window.d_max))
    throw EstimationError("insufficient resolution: empty profile window");

  BoundaryProfile p;
  p.anchor = anchor;
  p.direction = dir;
  p.tau = solution.tau;
  p.d.reserve(m);
  p.u.reserve(m);
  for (int k = 0; k < m; ++k) {
    const double f = m == 1 ? 0.0 : static_cast<double>(k) / (m - 1);
    const double d = window.d_min * std::pow(window.d_max / window.d_min, f);
    const Point x = anchor + d * dir;
    if (!contains(domain, x)) throw EstimationError("profile point left the domain");
    p.d.push_back(d);
    p.u.push_back(solution.interpolate(x));
  }
  return p;
}

BoundaryProfile extract_profile(const Solution& solution, const Point& anchor, int m,
                                std::optional<ProfileWindow> window) {
  const auto& domain = solution.grid.domain();
  if (!on_boundary(domain, anchor, 1e-7)) throw GeometryError("anchor is not on the boundary");
  const Point inward = -outward_normal(domain, anchor);
  return extract_profile_along(solution, anchor, inward, m,
                               window.value_or(default_window(solution)));
}

ExponentFit fit_holder_exponent(const BoundaryProfile& profile) {
  const auto m = profile.d.size();
  if (m < 8) throw EstimationError("exponent fit needs at least 8 samples");
  Eigen::MatrixXd A(m, 2);
  Eigen::VectorXd y(m);
  for (std::size_t k = 0; k < m; ++k) {
    if (!(profile.u[k] > 0.0)) throw EstimationError("nonpositive profile value");
    if (!(profile.d[k] > 0.0)) throw EstimationError("nonpositive profile distance");
    A(k, 0) = std::log(profile.d[k]);
    A(k, 1) = 1.0;
    y[k] = std::log(profile.u[k]);
  }
  const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(y);
  ExponentFit fit;
  fit.alpha = coef[0];
  fit.C = std::exp(coef[1]);
  fit.rms = std::sqrt((A * coef - y).squaredNorm() / static_cast<double>(m));
  fit.window = {profile.d.front(), profile.d.back()};
  fit.samples = static_cast<int>(m);
  return fit;
}

double predicted_exponent(double a, int n) {
  if (n < 2) throw ConfigError("dimension must be at least 2");
  if (!(a >= 2.0)) throw EstimationError("exponent prediction needs a >= 2");
  const double inv_a = std::isinf(a) ? 0.0 : 1.0 / a;
  return std::max(inv_a, 1.0 / (n + 1.0));
}

double holder_lift(double M, double alpha, double d) { return 2.0 * M * std::pow(d, alpha); }

ExponentReport estimate_exponent(const Solution& solution, const Point& anchor,
                                 double predicted_alpha, double tolerance, int m,
                                 std::optional<ProfileWindow> window) {
  const auto profile = extract_profile(solution, anchor, m, window);
  const auto fit = fit_holder_exponent(profile);
  ExponentReport rep;
  rep.anchor = anchor;
  rep.direction = profile.direction;
  rep.window = fit.window;
  rep.alpha = fit.alpha;
  rep.C = fit.C;
  rep.rms = fit.rms;
  const ProfileWindow half{fit.window.d_min, 0.5 * fit.window.d_max};
  rep.alpha_half_window =
      fit_holder_exponent(extract_profile_along(solution, anchor, profile.direction, m, half))
          .alpha;
  rep.unresolved_boundary_layer = std::abs(rep.alpha_half_window - rep.alpha) > 0.02;
  rep.predicted_alpha = predicted_alpha;
  rep.tolerance = tolerance;
  rep.pass = !rep.unresolved_boundary_layer && rep.alpha >= predicted_alpha - tolerance;
  return rep;
}

ConstantBoundReport check_constant_bound(const Solution& solution, BoundKind kind, double radius,
                                         double tolerance) {
  const auto& grid = solution.grid;
  const int n = solution.dimension();
  const double d_omega = grid.diameter();
  ConstantBoundReport rep;
  rep.kind = kind;
  rep.tolerance = tolerance;
  rep.min_margin = kInfinity;
  if (kind == BoundKind::kA2) {
    if (!(radius > 0.0)) throw ConfigError("the a = 2 bound needs an exterior sphere radius");
    const auto R = exterior_sphere_radius(grid.domain(), 256);
    if (!R || *R > radius * (1.0 + 1e-3))
      throw EstimationError("classification mismatch: no exterior sphere of the given radius");
    rep.constant = std::sqrt(2.0 * radius);
    rep.exponent = 0.5;
    // Same as holder_lift(sqrt(2R), 1/2, d) without rounding sqrt(2R) first.
    rep.holder_bound = 2.0 * std::sqrt(2.0 * radius * d_omega);
    // Within a few lifts of the boundary u / sqrt(d) is dominated by tau / sqrt(d).
    rep.d_min = 10.0 * solution.tau;
    for (int k = 0; k < grid.size(); ++k) {
      const double d = grid.node(k).boundary_distance;
      if (d < rep.d_min) continue;
      rep.sup_ratio = std::max(rep.sup_ratio, solution.u[k] / std::sqrt(d));
      rep.min_margin = std::min(rep.min_margin, rep.constant * std::sqrt(d) - solution.u[k]);
    }
    rep.pass = rep.sup_ratio <= rep.constant + tolerance;
    return rep;
  }
  const double p = 1.0 / (n + 1.0);
  rep.constant = (n + 1.0) * (n + 1.0);
  rep.exponent = p;
  rep.rescale = std::max(1.0, d_omega);
  rep.holder_bound = holder_lift(rep.constant, p, d_omega);
  const double s = rep.rescale;
  for (int k = 0; k < grid.size(); ++k) {
    const double d = grid.node(k).boundary_distance;
    const double u = solution.u[k];
    rep.sup_ratio = std::max(rep.sup_ratio, (u / s) / std::pow(d / s, p));
    rep.min_margin = std::min(rep.min_margin, s * rep.constant * std::pow(d / s, p) - u);
  }
  rep.pass = rep.sup_ratio <= rep.constant + tolerance && rep.min_margin >= 0.0;
  return rep;
}

double local_barrier_b(double a, double delta) {
  if (!(a > 1.0 && a < 2.0)) throw EstimationError("local estimate needs a in (1, 2)");
  const double b = 2.0 * (a + delta) / a;
  if (!(delta > 0.0) || !(b > 2.0 && b < 3.0))
    throw EstimationError("delta out of range: admissible delta lies in (0, " +
                          std::to_string(a / 2.0) + ")");
  return b;
}

LocalEstimateReport check_local_estimate(const Solution& solution, const Point& x0, double a,
                                         double delta, const LocalScaling& scaling) {
  LocalEstimateReport rep;
  rep.a = a;
  rep.delta = delta;
  rep.b = local_barrier_b(a, delta);
  rep.bound_exponent = 2.0 / (a * rep.b);
  if (solution.grid.diameter() > scaling.A * (1.0 + 1e-3))
    throw EstimationError("solution does not live on the rescaled domain");

  const auto& domain = solution.grid.domain();
  const Point axis = -outward_normal(domain, x0);
  ProfileWindow full = default_window(solution);
  const double nudge = 1e-9 * domain.extent();
  full.d_max = 0.9 * (ray_exit(domain, x0 + nudge * axis, axis) + nudge);
  const auto axis_profile = extract_profile_along(solution, x0, axis, 64, full);
  rep.axis_samples = static_cast<int>(axis_profile.d.size());
  for (std::size_t k = 0; k < axis_profile.d.size(); ++k)
    rep.max_ratio = std::max(rep.max_ratio,
                             axis_profile.u[k] / std::pow(axis_profile.d[k], rep.bound_exponent));
  rep.bound_pass = rep.max_ratio <= 1.0 + 1e-3;

  rep.fit = fit_holder_exponent(extract_profile_along(solution, x0, axis, 32,
                                                      default_window(solution)));
  rep.exponent_pass = rep.fit.alpha >= 1.0 / (a + delta) - 0.05;
  rep.pass = rep.bound_pass && rep.exponent_pass;
  return rep;
}

ComparisonReport check_comparison(const Solution& solution, const ComparisonBarrier& barrier,
                                  double tolerance) {
  ComparisonReport rep;
  rep.barrier = barrier.name;
  rep.tolerance = tolerance;
  rep.certified = barrier.certified;
  rep.max_difference = -kInfinity;
  const auto& grid = solution.grid;
  for (int k = 0; k < grid.size(); ++k) {
    double W;
    try {
      W = barrier.value(grid.node(k).x);
    } catch (const BarrierError& e) {
      throw EstimationError(std::string("barrier support does not cover the domain: ") +
                            e.what());
    }
    const double diff = solution.u[k] - W;
    if (diff > rep.max_difference) {
      rep.max_difference = diff;
      rep.argmax = grid.node(k).x;
    }
  }
  rep.pass = rep.certified && rep.max_difference <= tolerance;
  return rep;
}

ComparisonBarrier ball_barrier(double radius, const Point& center, double tau) {
  return {"ball", [=](const Point& x) {
            const double r2 = (x - center).squaredNorm();
            if (r2 > radius * radius * (1.0 + 1e-12))
              throw BarrierError("outside barrier support");
            return std::sqrt(std::max(0.0, radius * radius + tau * tau - r2));
          }};
}

ComparisonBarrier exterior_sphere_barrier(const DomainSpec& domain, double radius, double tau) {
  return {"exterior_sphere", [domain, radius, tau](const Point& x) {
            const double d = std::min(boundary_distance(domain, x), radius);
            return std::sqrt(2.0 * radius * d - d * d + tau * tau);
          }};
}

ComparisonBarrier flat_barrier(const DomainSpec& domain, double tau) {
  const double s = std::max(1.0, diameter(domain, 512));
  return {"flat", [domain, s, tau](const Point& x) {
            const double d = boundary_distance(domain, x);
            const double xn = std::min(d / s, 1.0);
            if (!(xn > 0.0)) return tau;
            return s * eval_flat_barrier(domain.dimension(), xn).U + tau;
          }};
}

ComparisonBarrier power_barrier(const BarrierParams& params, const Frame& frame, double tau,
                                bool certified) {
  return {family_tag(params.family),
          [params, frame, tau](const Point& x) { return barrier_value(params, frame, x) + tau; },
          certified};
}

}  // namespace hypmin
