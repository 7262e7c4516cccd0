#include "hypmin/cli.hpp"
#include "hypmin/io.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

using namespace hypmin;
using hypmin::io::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "hypmin");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string domain(const std::string& name) {
  return (test::config_dir() / "domains" / (name + ".json")).string();
}

json without_run_info(const fs::path& path) {
  json j = io::read_json(path);
  j.erase("run_info");
  return j;
}

}  // namespace

TEST_CASE("help and argument errors") {
  CHECK(run({"--help"}).code == cli::kOk);
  CHECK(run({"solve", "--help"}).code == cli::kOk);
  CHECK(run({}).code == cli::kConfigError);
  CHECK(run({"solve", "--bogus", "1"}).code == cli::kConfigError);
  CHECK(run({"frobnicate"}).code == cli::kConfigError);
  CHECK(run({"solve", "--domain", domain("disk"), "--h", "abc"}).code == cli::kConfigError);
  CHECK(run({"solve", "--domain", "/nonexistent/domain.json"}).code == cli::kConfigError);
}

TEST_CASE("solve rejects coarse grids and empty domains") {
  test::TempDir dir("cli");
  const auto coarse = run({"solve", "--domain", domain("disk"), "--h", "0.5", "--out", dir.path()});
  CHECK(coarse.code == cli::kConfigError);
  CHECK(coarse.err.find("grid too coarse") != std::string::npos);
  CHECK(run({"solve", "--domain", domain("empty"), "--out", dir.path()}).code ==
        cli::kConfigError);
}

TEST_CASE("solve then estimate on the disk") {
  test::TempDir dir("cli");
  const auto s = run({"solve", "--domain", domain("disk"), "--h", "1/64", "--out", dir.path()});
  REQUIRE(s.code == cli::kOk);
  CHECK(fs::exists(dir / "solution.csv"));
  const json meta = io::read_json(dir / "solution.json");
  CHECK(meta.at("h") == doctest::Approx(1.0 / 64.0));
  CHECK(meta.at("config").at("h") == doctest::Approx(1.0 / 64.0));
  CHECK(meta.at("residual").get<double>() <= meta.at("tolerance").get<double>());

  const auto est_dir = dir / "est";
  const auto e = run({"estimate", "--solution", (dir / "solution.csv").string(), "--out",
                      est_dir.string()});
  CHECK(e.code == cli::kOk);
  const json rep = io::read_json(est_dir / "estimate.json");
  CHECK(rep.at("pass") == true);
  CHECK(fs::exists(est_dir / "profile_0.csv"));

  SUBCASE("a solution with a rougher boundary profile fails with exit 4") {
    // Replace u by d^0.2 while keeping the file layout.
    std::ifstream in(dir / "solution.csv");
    std::ofstream bad(dir / "rough.csv");
    std::string line;
    std::getline(in, line);
    bad << line << '\n';
    while (std::getline(in, line)) {
      std::stringstream ss(line);
      std::string x, y, u, d, f;
      std::getline(ss, x, ',');
      std::getline(ss, y, ',');
      std::getline(ss, u, ',');
      std::getline(ss, d, ',');
      std::getline(ss, f, ',');
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", std::pow(std::stod(d), 0.2));
      bad << x << ',' << y << ',' << buf << ',' << d << ',' << f << '\n';
    }
    bad.close();
    fs::copy_file(dir / "solution.json", dir / "rough.json");
    const auto r = run({"estimate", "--solution", (dir / "rough.csv").string(), "--out",
                        (dir / "rough_est").string()});
    CHECK(r.code == cli::kEstimationFailed);
    CHECK(io::read_json(dir / "rough_est" / "estimate.json").at("pass") == false);
  }
}

TEST_CASE("barrier verification exit codes") {
  test::TempDir dir("cli");
  const std::string cap = domain("power_cap_a3");
  CHECK(run({"verify-barrier", "--domain", cap, "--family", "s3", "--samples", "20000", "--out",
             (dir / "s3").string()})
            .code == cli::kOk);
  const json rep = io::read_json(dir / "s3" / "certification.json");
  const double eps = rep.at("params").at("epsilon").get<double>();
  CHECK(run({"verify-barrier", "--domain", cap, "--family", "s3", "--samples", "20000",
             "--epsilon", std::to_string(2.0 * eps), "--out", (dir / "s3bad").string()})
            .code == cli::kCertificationFailed);
  CHECK(run({"verify-barrier", "--family", "flat", "--out", (dir / "flat").string()}).code ==
        cli::kOk);
  CHECK(run({"verify-barrier", "--family", "s4", "--a", "1.5", "--samples", "20000", "--out",
             (dir / "s4").string()})
            .code == cli::kOk);
  CHECK(run({"verify-barrier", "--family", "ball", "--out", (dir / "ball").string()}).code ==
        cli::kOk);
  CHECK(run({"verify-barrier", "--domain", domain("disk"), "--family", "s3", "--out",
             (dir / "nocap").string()})
            .code == cli::kConfigError);
  CHECK(run({"verify-barrier", "--family", "s7", "--out", (dir / "x").string()}).code ==
        cli::kConfigError);
}

TEST_CASE("reports are reproducible apart from timing") {
  test::TempDir dir("cli");
  const std::vector<std::string> certify = {"verify-barrier", "--domain", domain("power_cap_a3"),
                                            "--family", "s3", "--samples", "5000", "--seed", "9",
                                            "--out", dir.path().string()};
  const std::vector<std::string> classify = {"classify", "--domain", domain("ellipse"), "--out",
                                             dir.path().string()};
  REQUIRE(run(certify).code == cli::kOk);
  REQUIRE(run(classify).code == cli::kOk);
  const json cert = without_run_info(dir / "certification.json");
  const json cls = without_run_info(dir / "classification.json");
  REQUIRE(run(certify).code == cli::kOk);
  REQUIRE(run(classify).code == cli::kOk);
  CHECK(without_run_info(dir / "certification.json").dump(2) == cert.dump(2));
  CHECK(without_run_info(dir / "classification.json").dump(2) == cls.dump(2));
}

TEST_CASE("classify reports the boundary type") {
  test::TempDir dir("cli");
  REQUIRE(run({"classify", "--domain", domain("unit_square"), "--out", dir.path()}).code ==
          cli::kOk);
  CHECK(io::read_json(dir / "classification.json").at("classification").at("a") == "inf");
  REQUIRE(run({"classify", "--domain", domain("disk"), "--out", dir.path()}).code == cli::kOk);
  const json disk = io::read_json(dir / "classification.json");
  CHECK(disk.at("classification").at("a") == 2.0);
  CHECK(disk.at("classification").at("eta").get<double>() == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("config files supply flags and the command line wins") {
  test::TempDir dir("cli");
  const json cfg = {{"domain", domain("disk")}, {"h", "1/16"}, {"out", (dir / "cfg").string()}};
  io::write_json(dir / "run.json", cfg);
  REQUIRE(run({"solve", "--config", (dir / "run.json").string(), "--h", "1/32"}).code == cli::kOk);
  const json meta = io::read_json(dir / "cfg" / "solution.json");
  CHECK(meta.at("h") == doctest::Approx(1.0 / 32.0));
  CHECK(meta.at("config").at("domain") == domain("disk"));

  io::write_json(dir / "bad.json", json{{"colour", "blue"}});
  CHECK(run({"solve", "--config", (dir / "bad.json").string()}).code == cli::kConfigError);
}

TEST_CASE("validate-ball") {
  test::TempDir dir("cli");
  CHECK(run({"validate-ball", "--h", "1/32", "--out", dir.path()}).code == cli::kOk);
  const json rep = io::read_json(dir / "validate_ball.json");
  CHECK(rep.at("grid").at("max_error").get<double>() <= 5e-3);
  CHECK(rep.at("radial").at("identity_residual").get<double>() <= 1e-10);
  CHECK(run({"validate-ball", "--radius", "2", "--n", "3", "--out", dir.path()}).code == cli::kOk);
  CHECK(run({"validate-ball", "--n", "3", "--mode", "grid", "--out", dir.path()}).code ==
        cli::kConfigError);
}
