#include "hypmin/errors.hpp"
#include "hypmin/regularity.hpp"

#include <doctest.h>

#include <cmath>

using namespace hypmin;

namespace {

BoundaryProfile synthetic_profile(double C, double alpha, int m) {
  BoundaryProfile p;
  p.anchor = Point::Zero();
  p.direction = Point(0, 1);
  for (int k = 0; k < m; ++k) {
    const double d = 1e-3 * std::pow(100.0, static_cast<double>(k) / (m - 1));
    p.d.push_back(d);
    p.u.push_back(C * std::pow(d, alpha));
  }
  return p;
}

const Solution& disk_solution() {
  static const Solution sol = newton_solve(Grid(make_disk(1.0), 1.0 / 64.0));
  return sol;
}

}  // namespace

TEST_CASE("log-log fit recovers exact power laws") {
  for (double alpha : {0.2, 1.0 / 3.0, 0.5, 0.8}) {
    const auto fit = fit_holder_exponent(synthetic_profile(0.7, alpha, 16));
    CHECK(fit.alpha == doctest::Approx(alpha).epsilon(1e-12));
    CHECK(fit.C == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(fit.rms < 1e-12);
    CHECK(fit.samples == 16);
  }
  CHECK_THROWS_AS(fit_holder_exponent(synthetic_profile(1.0, 0.5, 7)), EstimationError);
  auto bad = synthetic_profile(1.0, 0.5, 10);
  bad.u[3] = 0.0;
  CHECK_THROWS_AS(fit_holder_exponent(bad), EstimationError);
}

TEST_CASE("predicted exponents") {
  CHECK(predicted_exponent(2.0, 2) == doctest::Approx(0.5));
  CHECK(predicted_exponent(2.5, 2) == doctest::Approx(0.4));
  CHECK(predicted_exponent(4.0, 2) == doctest::Approx(1.0 / 3.0));
  CHECK(predicted_exponent(kInfinity, 2) == doctest::Approx(1.0 / 3.0));
  CHECK(predicted_exponent(kInfinity, 5) == doctest::Approx(1.0 / 6.0));
  CHECK(predicted_exponent(3.0, 3) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(predicted_exponent(1.5, 2), EstimationError);
}

TEST_CASE("Holder lift and local exponent b") {
  CHECK(holder_lift(std::sqrt(2.0), 0.5, 2.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(holder_lift(3.0, 0.25, 16.0) == 12.0);
  CHECK(local_barrier_b(1.5, 0.25) == doctest::Approx(7.0 / 3.0));
  CHECK(2.0 / (1.5 * local_barrier_b(1.5, 0.25)) == doctest::Approx(1.0 / 1.75));
  CHECK_THROWS_AS(local_barrier_b(1.5, 0.8), EstimationError);
  CHECK_THROWS_AS(local_barrier_b(2.5, 0.1), EstimationError);
}

TEST_CASE("disk exponent, constant bound and comparison") {
  const auto& sol = disk_solution();
  const auto rep = estimate_exponent(sol, Point(1.0, 0.0), 0.5);
  CHECK(rep.pass);
  CHECK(rep.alpha == doctest::Approx(0.5).epsilon(0.06));
  CHECK((rep.direction - Point(-1.0, 0.0)).norm() < 1e-9);

  const auto a2 = check_constant_bound(sol, BoundKind::kA2, 1.0);
  CHECK(a2.pass);
  CHECK(a2.sup_ratio <= std::sqrt(2.0) + 5e-3);
  CHECK(a2.holder_bound == 4.0);
  CHECK_THROWS_AS(check_constant_bound(sol, BoundKind::kA2, 0.5), EstimationError);
  CHECK(check_constant_bound(sol, BoundKind::kAInf).pass);

  const auto cmp = check_comparison(sol, ball_barrier(1.0, Point::Zero(), sol.tau), 1e-6);
  CHECK(cmp.pass);
  CHECK(cmp.max_difference <= 1e-6);
  const auto ext = check_comparison(sol, exterior_sphere_barrier(sol.grid.domain(), 1.0, sol.tau),
                                    1e-6);
  CHECK(ext.pass);
  CHECK(check_comparison(sol, flat_barrier(sol.grid.domain(), sol.tau), 1e-6).pass);
  CHECK_THROWS_AS(check_comparison(sol, ball_barrier(0.5, Point::Zero(), sol.tau), 1e-6),
                  EstimationError);
  // A lower barrier must fail the comparison.
  const ComparisonBarrier low{"half", [&](const Point& x) {
                                return 0.5 * exact_ball_solution(1.0, x.norm());
                              }};
  CHECK_FALSE(check_comparison(sol, low, 1e-6).pass);
}

TEST_CASE("a profile that is too rough fails the estimate") {
  Solution rough = disk_solution();
  for (int k = 0; k < rough.grid.size(); ++k)
    rough.u[k] = std::pow(rough.grid.node(k).boundary_distance, 0.2) + rough.tau;
  const auto rep = estimate_exponent(rough, Point(0.0, 1.0), 0.5);
  CHECK_FALSE(rep.pass);
  CHECK(rep.alpha < 0.3);
}

TEST_CASE("profile extraction") {
  const auto& sol = disk_solution();
  const auto p = extract_profile(sol, Point(0.0, -1.0), 20);
  CHECK(p.d.size() == 20);
  for (std::size_t k = 1; k < p.d.size(); ++k) CHECK(p.d[k] > p.d[k - 1]);
  const auto w = default_window(sol);
  CHECK(p.d.front() == doctest::Approx(w.d_min));
  CHECK(w.d_min == doctest::Approx(std::max(10.0 * sol.tau, 2.0 / 64.0)));
  CHECK_THROWS_AS(extract_profile(sol, Point(0.5, 0.0), 20), GeometryError);
  CHECK_THROWS_AS(extract_profile(sol, Point(1.0, 0.0), 20, ProfileWindow{0.3, 0.1}),
                  EstimationError);
}

TEST_CASE("local estimate refuses a solution on the wrong scale") {
  const auto& sol = disk_solution();
  const auto s = choose_A(1.5, 1.0, 2.0, 2, 7.0 / 3.0);
  CHECK_THROWS_AS(check_local_estimate(sol, Point(0.0, -1.0), 1.5, 0.25, s), EstimationError);
}

TEST_CASE("pointwise quadratic-contact bound on disk and lens") {
  const Solution lens = newton_solve(Grid(make_lens(1.0, 1.0), 1.0 / 64.0));
  for (const auto* sol : {&disk_solution(), &lens}) {
    const double R = *exterior_sphere_radius(sol->grid.domain(), 256);
    double worst = -kInfinity;
    for (int k = 0; k < sol->grid.size(); ++k) {
      const double d = sol->grid.node(k).boundary_distance;
      worst = std::max(worst, sol->u[k] - std::sqrt(2.0 * R) * std::sqrt(d));
    }
    CHECK(worst <= 5e-3);
  }
}
