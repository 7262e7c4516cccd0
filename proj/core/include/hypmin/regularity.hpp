#pragma once

#include "hypmin/barriers.hpp"
#include "hypmin/solver.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hypmin {

struct ProfileWindow {
  double d_min = 0.0;
  double d_max = 0.0;
};

/// Default fit window: d_min = max(10 tau, 2 h), d_max = min(0.2 d, 8 d_min).
ProfileWindow default_window(const Solution& solution);

struct BoundaryProfile {
  Point anchor;
  Point direction;  ///< inward unit vector
  double tau = 0.0;
  std::vector<double> d;
  std::vector<double> u;
};

/// m log-spaced distances from `anchor` along the inward normal (bisector at
/// corners), values by bilinear interpolation of the solution.
BoundaryProfile extract_profile(const Solution& solution, const Point& anchor, int m,
                                std::optional<ProfileWindow> window = std::nullopt);

/// Same, along an explicit inward direction.
BoundaryProfile extract_profile_along(const Solution& solution, const Point& anchor,
                                      const Point& direction, int m, ProfileWindow window);

struct ExponentFit {
  double alpha = 0.0;
  double C = 0.0;
  double rms = 0.0;  ///< in log-log coordinates
  ProfileWindow window;
  int samples = 0;
};

/// Least squares of log u against log d over every sample of the profile.
ExponentFit fit_holder_exponent(const BoundaryProfile& profile);

/// max{1/a, 1/(n+1)}; a = kInfinity gives 1/(n+1). Requires a >= 2.
double predicted_exponent(double a, int n);

/// 2 M d^alpha, the Holder bound implied by |u(x)| <= M d_x^alpha.
double holder_lift(double M, double alpha, double d);

/// Exponent at one anchor, with the half-window robustness refit.
struct ExponentReport {
  Point anchor;
  Point direction;
  ProfileWindow window;
  double alpha = 0.0;
  double C = 0.0;
  double rms = 0.0;
  double alpha_half_window = 0.0;
  bool unresolved_boundary_layer = false;
  double predicted_alpha = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Fits the exponent at `anchor`; passes when alpha >= predicted - tolerance
/// and halving the window moves alpha by at most 0.02.
ExponentReport estimate_exponent(const Solution& solution, const Point& anchor,
                                 double predicted_alpha, double tolerance = 0.05, int m = 32,
                                 std::optional<ProfileWindow> window = std::nullopt);

enum class BoundKind { kA2, kAInf };

struct ConstantBoundReport {
  BoundKind kind = BoundKind::kA2;
  double constant = 0.0;        ///< sqrt(2R) or (n+1)^2
  double exponent = 0.0;        ///< 1/2 or 1/(n+1)
  double sup_ratio = 0.0;       ///< sup u / d^alpha (after rescaling for kAInf)
  double min_margin = 0.0;      ///< min over nodes of bound(x) - u(x)
  double holder_bound = 0.0;    ///< holder_lift(constant, alpha, d_Omega)
  double rescale = 1.0;         ///< max(1, d_Omega) for kAInf
  double d_min = 0.0;           ///< smallest d_x included in the sup
  double tolerance = 0.0;
  bool pass = false;
};

/// kA2: sup of u / sqrt(d_x) over nodes with d_x >= 10 tau against sqrt(2R).
/// kAInf: u <= s (n+1)^2 (d_x / s)^{1/(n+1)} with s = max(1, d_Omega) at every node.
ConstantBoundReport check_constant_bound(const Solution& solution, BoundKind kind,
                                         double radius = 0.0, double tolerance = 5e-3);

struct LocalEstimateReport {
  double a = 0.0;
  double delta = 0.0;
  double b = 0.0;
  double bound_exponent = 0.0;  ///< 2 / (a b) = 1 / (a + delta)
  double max_ratio = 0.0;       ///< max u(0, x_n) / x_n^{2/(ab)}
  int axis_samples = 0;
  ExponentFit fit;
  bool bound_pass = false;
  bool exponent_pass = false;
  bool pass = false;
};

/// b = 2 (a + delta) / a; throws EstimationError unless b lies in (2, 3).
double local_barrier_b(double a, double delta);

/// Checks u(0, x_n) <= x_n^{2/(ab)} (1 + 1e-3) along the inward axis at x0 and
/// fits the axis exponent against 1/(a + delta) - 0.05. The solution must
/// live on the domain rescaled by `scaling`.
LocalEstimateReport check_local_estimate(const Solution& solution, const Point& x0, double a,
                                         double delta, const LocalScaling& scaling);

/// Pointwise upper barrier for comparison.
struct ComparisonBarrier {
  std::string name;
  std::function<double(const Point&)> value;
  bool certified = true;
};

struct ComparisonReport {
  std::string barrier;
  double max_difference = 0.0;  ///< max over nodes of u - W
  Point argmax = Point::Zero();
  double tolerance = 0.0;
  bool certified = true;
  bool pass = false;
};

ComparisonReport check_comparison(const Solution& solution, const ComparisonBarrier& barrier,
                                  double tolerance);

// Barriers lifted to the boundary value tau of the solution they bound.

/// sqrt(R^2 + tau^2 - |x - center|^2).
ComparisonBarrier ball_barrier(double radius, const Point& center, double tau);
/// sqrt(2 R d_x - d_x^2 + tau^2), the enclosing-ball bound at each point.
ComparisonBarrier exterior_sphere_barrier(const DomainSpec& domain, double radius, double tau);
/// s U(d_x / s) + tau with U the flat barrier and s = max(1, d_Omega).
ComparisonBarrier flat_barrier(const DomainSpec& domain, double tau);
/// W in the given frame plus tau.
ComparisonBarrier power_barrier(const BarrierParams& params, const Frame& frame, double tau,
                                bool certified);

}  // namespace hypmin
