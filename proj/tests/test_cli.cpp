#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = ecsim::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const auto dir = fs::temp_directory_path() / "ecsim_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("run") {
  auto r = run({"run", "ecp1", "--alpha", "2", "--beta", "0.7071067811865476"});
  CHECK(r.code == ecsim::cli::kOk);
  CHECK(r.out.find("p_exact        0.499832") != std::string::npos);

  r = run({"run", "ecp1", "--alpha", "2", "--beta", "0.7071067811865476", "--json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["p_exact"].get<double>() == doctest::Approx(0.49983232493476676).epsilon(1e-12));
  CHECK(doc["final_fidelity"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));

  r = run({"run", "ecp2", "--alpha", "2", "--theta1", "0.7853981634", "--theta2", "0.7853981634", "--theta3",
           "0.5235987756", "--json"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["final_fidelity"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));

  CHECK(run({"run", "ecp2", "--beta", "0.5", "--gamma", "0.5", "--delta", "0.5", "--eta", "0.5"}).code == 0);
  CHECK(run({"run", "ecp1", "--alpha", "2", "--beta", "0"}).code == ecsim::cli::kDegenerate);
  CHECK(run({"run", "ecp1", "--beta", "1.5"}).code == ecsim::cli::kDegenerate);
  CHECK(run({"run", "ecp1", "--alpha", "0", "--beta", "0.5"}).code == ecsim::cli::kDegenerate);
  CHECK(run({"run", "ecp2", "--theta1", "0"}).code == ecsim::cli::kDegenerate);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == ecsim::cli::kUsage);
  CHECK(run({"bogus"}).code == ecsim::cli::kUsage);
  CHECK(run({"run", "ecp9"}).code == ecsim::cli::kUsage);
  CHECK(run({"run", "ecp1", "--beta", "abc"}).code == ecsim::cli::kUsage);
  CHECK(run({"run", "ecp1"}).code == ecsim::cli::kUsage);
  CHECK(run({"sweep-ecp1", "--steps", "1"}).code == ecsim::cli::kUsage);
  CHECK(run({"validate", "--inject-fault", "everything"}).code == ecsim::cli::kUsage);
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("sweep-ecp1") != std::string::npos);
  CHECK(run({"exec", "--help"}).code == 0);
}

TEST_CASE("sweeps") {
  const auto dir = scratch();
  auto r = run({"sweep-ecp1", "--out", (dir / "a.csv").string()});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("gamma_convention=derived") != std::string::npos);
  r = run({"sweep-ecp1", "--out", (dir / "b.csv").string(), "--jobs", "3"});
  REQUIRE(r.code == 0);
  const auto a = slurp(dir / "a.csv");
  CHECK(a == slurp(dir / "b.csv"));
  CHECK(std::count(a.begin(), a.end(), '\n') == 604);

  r = run({"sweep-ecp1", "--alpha", "1,2", "--steps", "5"});
  REQUIRE(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 11);
  r = run({"sweep-ecp1", "--steps", "3", "--gamma", "0.4"});
  CHECK(r.err.find("explicit") != std::string::npos);

  r = run({"sweep-ecp2", "--steps", "5", "--theta3", "0.5"});
  REQUIRE(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 26);
  CHECK(r.out.find(",0.5,") != std::string::npos);

  CHECK(run({"sweep-ecp1", "--out", (dir / "missing" / "x.csv").string()}).code == ecsim::cli::kIoError);
}

TEST_CASE("validate") {
  auto r = run({"validate", "--draws", "10"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  const auto again = run({"validate", "--draws", "10", "--seed", "42"});
  CHECK(again.out == r.out);

  r = run({"validate", "--draws", "10", "--inject-fault", "n3-sign"});
  CHECK(r.code == ecsim::cli::kValidationFailed);
  CHECK(r.out.find("FAIL N3") != std::string::npos);
  CHECK(r.out.find("FAIL N1") == std::string::npos);
}

TEST_CASE("exec") {
  const std::string dir = ECSIM_CIRCUITS_DIR;
  auto r = run({"exec", dir + "/ecp1.circ"});
  CHECK(r.code == 0);
  CHECK(r.out.find("fidelity=1") != std::string::npos);
  CHECK(run({"exec", dir + "/ecp2.circ"}).code == 0);
  CHECK(run({"exec", dir + "/ecp1_prob_fail.circ"}).code == ecsim::cli::kAssertionFailed);
  CHECK(run({"exec", dir + "/does_not_exist.circ"}).code == ecsim::cli::kMissingFile);

  const auto broken = scratch() / "broken.circ";
  std::ofstream(broken) << "alpha 1\nmodes a b\nbs a q -> c d\n";
  r = run({"exec", broken.string()});
  CHECK(r.code == ecsim::cli::kParseError);
  CHECK(r.err.find("broken.circ:3:") != std::string::npos);

  const auto degenerate = scratch() / "degenerate.circ";
  std::ofstream(degenerate) << "alpha 1\nmodes a\nnormalize\n";
  r = run({"exec", degenerate.string()});
  CHECK(r.code == ecsim::cli::kDegenerate);
  CHECK(r.err.find(":3") != std::string::npos);
}
