#include "hypmin/errors.hpp"
#include "hypmin/solver.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace hypmin;

namespace {

Eigen::VectorXd perturbed_ball(const Grid& grid, double tau, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(0.9, 1.1);
  const double R = 0.5 * grid.diameter();
  Eigen::VectorXd u(grid.size());
  for (int k = 0; k < grid.size(); ++k) {
    const double d = std::min(grid.node(k).boundary_distance, R);
    u[k] = std::sqrt(2.0 * R * d - d * d + tau * tau) * jitter(rng);
  }
  return u;
}

// F written out from Delta u - u_i u_j u_ij / (1 + |grad u|^2) + n / u with
// centered differences on the full five-plus-diagonal neighborhood.
double direct_F(const Grid& grid, const Eigen::VectorXd& u, int k) {
  const auto& nd = grid.node(k);
  const double h = grid.spacing();
  auto at = [&](int di, int dj) { return u[grid.index_of(nd.i + di, nd.j + dj)]; };
  const double ux = (at(1, 0) - at(-1, 0)) / (2 * h);
  const double uy = (at(0, 1) - at(0, -1)) / (2 * h);
  const double uxx = (at(1, 0) - 2 * u[k] + at(-1, 0)) / (h * h);
  const double uyy = (at(0, 1) - 2 * u[k] + at(0, -1)) / (h * h);
  const double uxy = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * h * h);
  const double lap = uxx + uyy;
  const double quad = ux * ux * uxx + 2 * ux * uy * uxy + uy * uy * uyy;
  return lap - quad / (1 + ux * ux + uy * uy) + 2.0 / u[k];
}

void check_jacobian(const Grid& grid, double tau) {
  const Eigen::VectorXd u = perturbed_ball(grid, tau, 7);
  const Eigen::MatrixXd J = Eigen::MatrixXd(jacobian_F(grid, u, tau));
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(0, grid.size() - 1);
  for (int trial = 0; trial < 40; ++trial) {
    const int c = pick(rng);
    const double eps = 1e-6 * u[c];
    Eigen::VectorXd up = u, um = u;
    up[c] += eps;
    um[c] -= eps;
    const Eigen::VectorXd col = (residual_F(grid, up, tau) - residual_F(grid, um, tau)) / (2 * eps);
    const double scale = std::max(1.0, col.lpNorm<Eigen::Infinity>());
    CHECK((J.col(c) - col).lpNorm<Eigen::Infinity>() <= 1e-5 * scale);
  }
}

}  // namespace

TEST_CASE("Jacobian matches central differences of the residual") {
  check_jacobian(Grid(make_disk(1.0), 1.0 / 16.0), 0.05);
  check_jacobian(Grid(make_power_cap(1.5, 1.0, 1.0), 1.0 / 24.0), 0.02);
  check_jacobian(Grid(make_ellipse(1.0, 0.6, Point(0.01, 0.02), 0.3), 1.0 / 20.0), 0.03);
  check_jacobian(Grid(make_rectangle(Point(0, 0), Point(1.0, 1.0 - 1.0 / 64.0)), 1.0 / 32.0),
                 0.02);
}

TEST_CASE("residual agrees with direct assembly at interior nodes") {
  const Grid grid(make_disk(1.0), 1.0 / 32.0);
  const Eigen::VectorXd u = perturbed_ball(grid, 0.1, 3);
  const Eigen::VectorXd F = residual_F(grid, u, 0.1);
  int checked = 0;
  for (int k = 0; k < grid.size(); ++k) {
    if (grid.node(k).squared_form) continue;
    CHECK(F[k] == doctest::Approx(direct_F(grid, u, k)).epsilon(1e-9));
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("lifted hemisphere is exact where the field is differentiated squared") {
  const double tau = 0.01;
  const Grid grid(make_disk(1.0), 1.0 / 64.0);
  Eigen::VectorXd u(grid.size());
  for (int k = 0; k < grid.size(); ++k)
    u[k] = lifted_ball_solution(1.0, tau, grid.node(k).x.norm());
  const Eigen::VectorXd F = residual_F(grid, u, tau);
  double near = 0.0, far = 0.0;
  for (int k = 0; k < grid.size(); ++k) {
    double& slot = grid.node(k).squared_form ? near : far;
    slot = std::max(slot, std::abs(F[k]));
  }
  // u^2 is quadratic, so only rounding remains in the band; elsewhere the
  // truncation error is O(h^2).
  CHECK(near <= 1e-6);
  CHECK(far <= 5e-3);
}

TEST_CASE("lift schedule") {
  SolverConfig cfg;
  const auto taus = lift_schedule(cfg, 2.0);
  CHECK(taus.front() == doctest::Approx(0.2));
  CHECK(taus.back() == doctest::Approx(2e-3));
  for (std::size_t k = 1; k < taus.size(); ++k) CHECK(taus[k] < taus[k - 1]);
  for (std::size_t k = 1; k + 1 < taus.size(); ++k)
    CHECK(taus[k] / taus[k - 1] == doctest::Approx(0.5));
  cfg.tau_ratio = 1.5;
  CHECK_THROWS_AS(lift_schedule(cfg, 2.0), ConfigError);
}

TEST_CASE("disk solve converges to the hemisphere") {
  const Grid grid(make_disk(1.0), 1.0 / 32.0);
  const Solution sol = newton_solve(grid);
  CHECK(sol.residual <= sol.tolerance);
  CHECK(sol.tau == doctest::Approx(2e-3));
  CHECK(sol.u.minCoeff() > 0.0);
  double err = 0.0, above = -kInfinity;
  for (int k = 0; k < grid.size(); ++k) {
    const auto& n = grid.node(k);
    if (n.boundary_distance >= 0.05)
      err = std::max(err, std::abs(sol.u[k] - exact_ball_solution(1.0, n.x)));
    above = std::max(above, sol.u[k] - lifted_ball_solution(1.0, sol.tau, n.x.norm()));
  }
  CHECK(err <= 5e-3);
  CHECK(above <= 1e-3);
  // Mirror symmetry of the discrete problem.
  for (int k = 0; k < grid.size(); ++k) {
    const int m = grid.locate(Point(-grid.node(k).x.x(), grid.node(k).x.y()));
    REQUIRE(m >= 0);
    CHECK(sol.u[m] == doctest::Approx(sol.u[k]).epsilon(1e-8));
  }
  // A stage ends either below its tolerance or on a negligible correction
  // with the residual within rounding of the tolerance.
  for (const auto& s : sol.stages) {
    CHECK((s.residual <= s.tolerance || s.step_converged));
    CHECK(s.residual <= 10.0 * s.tolerance);
  }
  CHECK(sol.interpolate(grid.node(5).x) == doctest::Approx(sol.u[5]));
}

TEST_CASE("stage fields are kept on request") {
  SolverConfig cfg;
  cfg.keep_stage_fields = true;
  const Solution sol = newton_solve(Grid(make_disk(1.0), 1.0 / 16.0), cfg);
  for (const auto& s : sol.stages) CHECK(s.u.has_value());
}

TEST_CASE("solver failures carry stage diagnostics") {
  SolverConfig cfg;
  cfg.max_newton = 1;
  try {
    newton_solve(Grid(make_disk(1.0), 1.0 / 32.0), cfg);
    FAIL("expected a solver error");
  } catch (const SolverError& e) {
    CHECK(std::string(e.what()).find("completed stages") != std::string::npos);
  }
  CHECK_THROWS_AS(newton_solve(Grid(make_disk(1.0, Point::Zero(), 3), 1.0 / 16.0)), ConfigError);
  SolverConfig bad;
  bad.residual_rtol = -1.0;
  CHECK_THROWS_AS(newton_solve(Grid(make_disk(1.0), 1.0 / 16.0), bad), ConfigError);
  const Grid grid(make_disk(1.0), 1.0 / 16.0);
  Eigen::VectorXd u = Eigen::VectorXd::Ones(grid.size());
  u[0] = 0.0;
  CHECK_THROWS_AS(residual_F(grid, u, 0.1), SolverError);
}

TEST_CASE("exact ball helpers") {
  CHECK(exact_ball_solution(2.0, Point(1.2, 0.0)) == doctest::Approx(1.6));
  CHECK(lifted_ball_solution(1.0, 0.0, 0.6) == doctest::Approx(0.8));
  CHECK_THROWS_AS(exact_ball_solution(1.0, 1.5), GeometryError);
}

TEST_CASE("the discrete operator is consistent on the exact ball solution") {
  std::vector<double> err;
  for (int N : {16, 32, 64}) {
    const Grid grid(make_disk(1.0), 1.0 / N);
    Eigen::VectorXd u(grid.size());
    for (int k = 0; k < grid.size(); ++k) u[k] = exact_ball_solution(1.0, grid.node(k).x);
    const Eigen::VectorXd F = residual_F(grid, u, 0.0);
    double worst = 0.0;
    for (int k = 0; k < grid.size(); ++k)
      if (grid.node(k).boundary_distance >= 0.1) worst = std::max(worst, std::abs(F[k]));
    err.push_back(worst);
  }
  CAPTURE(err[0]);
  CAPTURE(err[1]);
  CAPTURE(err[2]);
  CHECK(std::log2(err[0] / err[1]) >= 0.9);
  CHECK(std::log2(err[1] / err[2]) >= 0.9);
}

TEST_CASE("continuation stages are positive and decrease with tau") {
  SolverConfig cfg;
  cfg.keep_stage_fields = true;
  for (const auto& dom : {make_ellipse(1.0, 0.6, Point(0.1, 0.05), 0.3), make_lens(1.0, 1.0)}) {
    const Solution sol = newton_solve(Grid(dom, 1.0 / 32.0), cfg);
    CHECK(sol.u.minCoeff() >= sol.tau * (1.0 - 1e-12));
    for (std::size_t s = 1; s < sol.stages.size(); ++s) {
      REQUIRE(sol.stages[s].tau < sol.stages[s - 1].tau);
      const Eigen::VectorXd diff = *sol.stages[s].u - *sol.stages[s - 1].u;
      CHECK(diff.maxCoeff() <= 1e-8);
      CHECK(sol.stages[s].u->minCoeff() >= sol.stages[s].tau * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("lattice translations and quarter turns map solutions onto each other") {
  const double h = 1.0 / 32.0;
  const auto dom = make_ellipse(1.0, 0.6, Point(0.1, 0.05), 0.3);
  const Solution base = newton_solve(Grid(dom, h));
  const Solution moved =
      newton_solve(Grid(rigid_transform(dom, 0.5 * std::numbers::pi, Point(3 * h, -5 * h)), h));
  REQUIRE(moved.grid.size() == base.grid.size());
  CHECK(moved.tau == doctest::Approx(base.tau).epsilon(1e-12));
  double worst = 0.0;
  for (int k = 0; k < base.grid.size(); ++k) {
    const Point x = base.grid.node(k).x;
    const int m = moved.grid.locate(Point(-x.y() + 3 * h, x.x() - 5 * h));
    REQUIRE(m >= 0);
    worst = std::max(worst, std::abs(moved.u[m] - base.u[k]));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("solutions are concave along grid lines") {
  // C is calibrated on the disk, where no second difference is positive.
  const double h = 1.0 / 32.0;
  auto worst = [](const Solution& s) {
    const auto& g = s.grid;
    double w = -kInfinity;
    for (int k = 0; k < g.size(); ++k) {
      const auto& nd = g.node(k);
      for (auto [di, dj] : {std::pair{1, 0}, std::pair{0, 1}}) {
        const int p = g.index_of(nd.i + di, nd.j + dj), m = g.index_of(nd.i - di, nd.j - dj);
        if (p >= 0 && m >= 0) w = std::max(w, s.u[p] - 2.0 * s.u[k] + s.u[m]);
      }
    }
    return w;
  };
  const double C = std::max(0.0, worst(newton_solve(Grid(make_disk(1.0), h)))) / h;
  for (const auto& dom : {make_unit_square(), make_ellipse(1.0, 0.6, Point(0.1, 0.05), 0.3),
                          make_lens(1.0, 1.0), make_power_cap(3.0, 1.0, 0.5)}) {
    CHECK(worst(newton_solve(Grid(dom, h))) <= C * h + 1e-12);
  }
}
