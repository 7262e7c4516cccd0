#include "hypmin/errors.hpp"
#include "hypmin/io.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <fstream>
#include <random>

using namespace hypmin;
using hypmin::io::json;

TEST_CASE("domain JSON round trip preserves membership") {
  const std::vector<DomainSpec> domains = {
      make_disk(1.3, Point(0.2, 0.1)), make_unit_square(),
      make_ellipse(2.0, 1.0, Point(0.1, 0.0), 0.3), make_lens(1.0, 1.2),
      rigid_transform(make_power_cap(1.5, 2.0, 0.7), 0.4, Point(1, 2))};
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const auto& dom : domains) {
    const json j = io::to_json(dom);
    const DomainSpec back = io::domain_from_json(j);
    CHECK(io::to_json(back) == j);
    CHECK(back.dimension() == dom.dimension());
    for (int k = 0; k < 500; ++k) {
      const Point x(u(rng), u(rng));
      CHECK(contains(back, x) == contains(dom, x));
    }
  }
}

TEST_CASE("shipped domain files load") {
  for (const char* name : {"disk", "unit_square", "ellipse", "lens", "power_cap_a1.5",
                           "power_cap_a3"}) {
    CAPTURE(name);
    const auto dom = io::load_domain(test::config_dir() / "domains" / (std::string(name) + ".json"));
    CHECK(contains(dom, dom.interior_point()));
  }
  CHECK_THROWS_AS(io::load_domain(test::config_dir() / "domains" / "empty.json"), GeometryError);
}

TEST_CASE("malformed domains are configuration errors") {
  CHECK_THROWS_AS(io::domain_from_json(json::array()), ConfigError);
  CHECK_THROWS_AS(io::domain_from_json(json{{"n", 2}}), ConfigError);
  CHECK_THROWS_AS(io::domain_from_json(json::parse(
                      R"({"n":2,"primitives":[{"kind":"torus"}],"interior_point":[0,0]})")),
                  ConfigError);
  CHECK_THROWS_AS(io::domain_from_json(json::parse(
                      R"({"n":2,"primitives":[{"kind":"disk","center":[0,0]}],"interior_point":[0,0]})")),
                  ConfigError);
  CHECK_THROWS_AS(io::domain_from_json(json::parse(
                      R"({"n":2,"primitives":[{"kind":"disk","center":[0],"radius":1}],"interior_point":[0,0]})")),
                  ConfigError);
  test::TempDir dir("io");
  std::ofstream(dir / "bad.json") << "{ not json";
  CHECK_THROWS_AS(io::read_json(dir / "bad.json"), ConfigError);
  CHECK_THROWS_AS(io::read_json(dir / "missing.json"), ConfigError);
}

TEST_CASE("solution CSV round trip is exact") {
  test::TempDir dir("io");
  const Solution sol = newton_solve(Grid(make_ellipse(1.0, 0.6), 1.0 / 24.0));
  io::write_solution_csv(dir / "solution.csv", sol);
  io::write_json(dir / "solution.json", io::solution_metadata(sol));
  const Solution back = io::load_solution(dir / "solution.csv", dir / "solution.json");
  CHECK(back.grid.size() == sol.grid.size());
  CHECK(back.tau == sol.tau);
  CHECK((back.u - sol.u).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(back.stages.size() == sol.stages.size());

  std::ifstream in(dir / "solution.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,y,u,d_x,F_residual");

  // A truncated file is reported, not silently accepted.
  std::ofstream(dir / "short.csv") << "x,y,u,d_x,F_residual\n0,0,1,1,0\n";
  CHECK_THROWS_AS(io::load_solution(dir / "short.csv", dir / "solution.json"), ConfigError);
}

TEST_CASE("reports serialize infinite exponents as strings") {
  DomainClassification c;
  c.samples = 4;
  const json j = io::to_json(c);
  CHECK(j.at("a") == "inf");
  CHECK(j.at("eta").is_null());
  BoundaryClassification b;
  b.a = 2.0;
  b.eta = 0.5;
  b.frame = Frame::from_normal(Point::Zero(), Point(0, 1));
  CHECK(io::to_json(b).at("a") == 2.0);
}

TEST_CASE("solver configuration JSON") {
  SolverConfig c;
  c.tau_min = 1e-4;
  c.max_newton = 30;
  const SolverConfig back = io::solver_config_from_json(io::to_json(c));
  CHECK(back.tau_min == 1e-4);
  CHECK(back.max_newton == 30);
  CHECK_THROWS_AS(io::solver_config_from_json(json::array()), ConfigError);
}
