#include "hypmin/errors.hpp"
#include "hypmin/grid.hpp"

#include <doctest.h>

#include <cmath>

using namespace hypmin;

namespace {

// Bisection for the first exit along x + t e, t in (0, limit].
double bisect_exit(const DomainSpec& dom, const Point& x, const Point& e, double limit) {
  if (contains(dom, x + limit * e)) return limit;
  double lo = 0.0, hi = limit;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (contains(dom, x + mid * e) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

TEST_CASE("arms agree with bisection") {
  for (const auto& dom : {make_disk(1.0), make_power_cap(1.5, 1.0, 1.0), make_ellipse(1.0, 0.6)}) {
    const double h = 1.0 / 32.0;
    const Grid grid(dom, h);
    const Point axes[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    const Point diags[4] = {{1, 1}, {-1, -1}, {-1, 1}, {1, -1}};
    for (const auto& n : grid.nodes()) {
      for (int d = 0; d < 4; ++d) {
        const double t = bisect_exit(dom, n.x, axes[d], h) / h;
        if (n.neighbor[d] >= 0) {
          CHECK(t == 1.0);
          CHECK(n.arm[d] == 1.0);
        } else {
          CHECK(n.arm[d] == doctest::Approx(std::max(t, kMinArm)).epsilon(1e-9));
        }
        const Point e = diags[d].normalized();
        const double td = bisect_exit(dom, n.x, e, std::sqrt(2.0) * h) / (std::sqrt(2.0) * h);
        if (n.diagonal_neighbor[d] < 0)
          CHECK(n.diagonal_arm[d] == doctest::Approx(std::max(td, kMinArm)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("nodes are exactly the lattice points inside") {
  const auto dom = make_ellipse(1.0, 0.6, Point(0.013, -0.021), 0.3);
  const Grid grid(dom, 1.0 / 40.0);
  int inside = 0;
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i) {
      const Point x = grid.position(i, j);
      const bool in = contains(dom, x) && boundary_distance(dom, x) >= kMinArm * grid.spacing();
      CHECK((grid.index_of(i, j) >= 0) == in);
      inside += in;
    }
  CHECK(inside == grid.size());
  for (int k = 0; k < grid.size(); ++k) CHECK(grid.locate(grid.node(k).x) == k);
}

TEST_CASE("stencils are exact for quadratics vanishing on the boundary") {
  // p = R^2 - |x - c|^2 equals tau = 0 on the circle, so every cut-cell form
  // with boundary coefficient times zero must reproduce its derivatives.
  const Point c(0.05, -0.03);
  const double R = 0.9;
  const Grid grid(make_disk(R, c), 1.0 / 37.0);
  Eigen::VectorXd p(grid.size());
  for (int k = 0; k < grid.size(); ++k) p[k] = R * R - (grid.node(k).x - c).squaredNorm();
  for (int k = 0; k < grid.size(); ++k) {
    const auto& st = grid.stencil(k);
    const Point q = grid.node(k).x - c;
    CHECK(st.dxx.apply(p, 0.0) == doctest::Approx(-2.0).epsilon(1e-7));
    CHECK(st.dyy.apply(p, 0.0) == doctest::Approx(-2.0).epsilon(1e-7));
    CHECK(std::abs(st.dxy.apply(p, 0.0)) < 1e-6);
    CHECK(st.dx.apply(p, 0.0) == doctest::Approx(-2.0 * q.x()).epsilon(1e-7).scale(1.0));
    CHECK(st.dy.apply(p, 0.0) == doctest::Approx(-2.0 * q.y()).epsilon(1e-7).scale(1.0));
  }
}

TEST_CASE("mixed stencil is exact for xy on full interior nodes") {
  const Grid grid(make_unit_square(), 1.0 / 20.0);
  Eigen::VectorXd p(grid.size());
  for (int k = 0; k < grid.size(); ++k) p[k] = grid.node(k).x.x() * grid.node(k).x.y();
  for (int k = 0; k < grid.size(); ++k) {
    const auto& n = grid.node(k);
    bool full = true;
    for (int d = 0; d < 4; ++d) full = full && n.neighbor[d] >= 0 && n.diagonal_neighbor[d] >= 0;
    if (full) CHECK(grid.stencil(k).dxy.apply(p, 0.0) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("interpolation weights reproduce quadratics along the line") {
  const Grid grid(make_power_cap(1.5, 1.0, 1.0), 1.0 / 64.0);
  int interpolated = 0;
  for (const auto& n : grid.nodes()) {
    if (!n.interpolated()) continue;
    ++interpolated;
    const double b = n.interpolation_boundary_weight;
    const auto& w = n.interpolation_weights;
    // Constants and linear functions of the line coordinate must be exact.
    CHECK(b + w[0] + w[1] == doctest::Approx(1.0).epsilon(1e-12));
    if (n.interpolation_nodes[1] >= 0) {
      // Boundary at -t, nodes at 1 and 2: recover t from the weights and
      // check exactness for s and s^2.
      const double t = -w[1] * 2.0 / (1.0 + w[1]);
      CHECK(-t * b + w[0] + 2.0 * w[1] == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
      CHECK(t * t * b + w[0] + 4.0 * w[1] == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
      CHECK(t < kInterpolationArm);
    }
    CHECK(n.squared_form);
  }
  CHECK(interpolated > 0);
}

TEST_CASE("squared band covers the cut cells") {
  const Grid grid(make_disk(1.0), 1.0 / 32.0);
  for (const auto& n : grid.nodes()) {
    bool cut = false;
    for (int d = 0; d < 4; ++d) cut = cut || n.neighbor[d] < 0 || n.diagonal_neighbor[d] < 0;
    if (cut || n.boundary_distance < kSquaredBand * grid.diameter()) CHECK(n.squared_form);
    if (n.boundary_distance > kSquaredBand * grid.diameter() + 2.0 * grid.spacing())
      CHECK_FALSE(n.squared_form);
  }
}

TEST_CASE("grid errors") {
  CHECK_THROWS_AS(Grid(make_disk(1.0), 0.5), GridError);
  CHECK_THROWS_AS(Grid(make_disk(1.0), -1.0), ConfigError);
}
