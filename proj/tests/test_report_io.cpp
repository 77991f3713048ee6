#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "pu/errors.hpp"
#include "pu/report_io.hpp"

using namespace pu;

TEST_CASE("format_double round trips") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 1e-9,
                   std::numeric_limits<double>::denorm_min()}) {
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("trajectory CSV round trip is exact") {
  const auto p = PuParams::from_frequencies(2.0, 1.0);
  auto traj = integrate(Field{p, quartic(0.25)}, PhaseState{0.3, -0.1, 0.2, 0.7}, 1e-2, 2.0);
  monitor(traj, {{"H1", hamiltonian_h1(p)}, {"H2", hamiltonian_h2(p)}});
  monitor(traj, {{"Hint", hamiltonian_h1(p)}}, quartic(0.25));
  const auto table = trajectory_table(traj);
  std::stringstream ss;
  write_csv(ss, table);
  const auto back = read_csv(ss);
  CHECK(back.header == std::vector<std::string>{"t", "q", "qd", "qdd", "qddd", "H1", "H2", "Hint"});
  REQUIRE(back.rows.size() == traj.samples.size());
  for (std::size_t i = 0; i < back.rows.size(); ++i) {
    const auto& [t, v] = traj.samples[i];
    CHECK(back.rows[i][0] == t);
    CHECK(back.rows[i][1] == v.q);
    CHECK(back.rows[i][4] == v.qddd);
    CHECK(back.rows[i][7] == traj.charges[2][i]);
  }
}

TEST_CASE("CSV parse errors") {
  std::stringstream ragged("a,b\n1,2\n3\n");
  CHECK_THROWS_AS(read_csv(ragged), InvalidInput);
  std::stringstream bad("a\n1x\n");
  CHECK_THROWS_AS(read_csv(bad), InvalidInput);
  std::stringstream empty("");
  CHECK_THROWS_AS(read_csv(empty), InvalidInput);
}

TEST_CASE("report JSON schema") {
  VerificationReport rep;
  rep.seed = 7;
  rep.params["alpha"] = 5.0;
  rep.checks.push_back({"a.b", "topic/key", true, 1e-15, 3});
  rep.checks.push_back({"a.c", "topic/key", false, std::nan(""), 1});
  rep.resolved["x"] = "y";
  const auto j = nlohmann::json::parse(report_to_json(rep));
  CHECK(j["seed"] == 7);
  CHECK(j["params"]["alpha"] == 5.0);
  CHECK(j["checks"].size() == 2);
  CHECK(j["checks"][0]["id"] == "a.b");
  CHECK(j["checks"][0]["anchor"] == "topic/key");
  CHECK(j["checks"][0]["residual"] == 1e-15);
  CHECK(j["checks"][0]["samples"] == 3);
  CHECK(j["checks"][1]["residual"] == "nan");
  CHECK(j["resolved"]["x"] == "y");
  CHECK(j["pass"] == false);
}

TEST_CASE("atomic write replaces the file") {
  const auto path = std::filesystem::temp_directory_path() / "pu_report_io_test.txt";
  write_atomic(path, "first\n");
  write_atomic(path, "second\n");
  std::ifstream in(path);
  std::string s;
  std::getline(in, s);
  CHECK(s == "second");
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  std::filesystem::remove(path);
}

TEST_CASE("verification is deterministic in the seed") {
  VerifyConfig cfg;
  cfg.seed = 99;
  const auto a = report_to_json(run_suite("transform", cfg));
  const auto b = report_to_json(run_suite("transform", cfg));
  CHECK(a == b);
  CHECK_THROWS_AS(run_suite("nope", cfg), InvalidInput);
}
