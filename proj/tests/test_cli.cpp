#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "evolint/compute.hpp"
#include "evolint/errors.hpp"
#include "evolint/scenario.hpp"
#include "evolint/suites.hpp"

using namespace evolint;
using nlohmann::json;

namespace {

json minimal() {
  return json::parse(R"({
    "algebra": {"blocks": [2]},
    "frame": {"times": [1], "weights": ["1"]},
    "grids": [{"unitaries": [[[1,0],[0,0],[0,0],[1,0]]]}]
  })");
}

int run(const std::string& args) {
  const std::string cmd = std::string(EVOLINT_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("minimal config loads to a one-dimensional space") {
  const Scenario s = parse_scenario(minimal());
  CHECK(s.space->dimension() == 1);
  CHECK(s.dynamics_kind == "trivial");
  CHECK(run_suite(s).passed());
}

TEST_CASE("fingerprints are deterministic and sensitive") {
  const Scenario a = parse_scenario(minimal());
  const Scenario b = parse_scenario(minimal());
  CHECK(a.fingerprint == b.fingerprint);
  CHECK(a.fingerprint.size() == 16);
  LoadOptions o;
  o.seed = 9;
  CHECK(parse_scenario(minimal(), o).fingerprint != a.fingerprint);
  // FNV-1a 64 of the empty object "{}"
  CHECK(fingerprint(json::object()) == "08f44b07b5901a25");
}

TEST_CASE("schema violations") {
  json j = minimal();
  j["grids"] = json::array();
  CHECK_THROWS_AS(parse_scenario(j), SchemaError);
  j = minimal();
  j["frame"]["weights"] = {"-1"};
  CHECK_THROWS_AS(parse_scenario(j), SchemaError);
  j = minimal();
  j["dynamics"] = {{"kind", "magic"}};
  CHECK_THROWS_AS(parse_scenario(j), SchemaError);
  j = minimal();
  j["conjugator"] = {{"matrix", {{2, 0}}}};
  CHECK_THROWS_AS(parse_scenario(j), SchemaError);
}

TEST_CASE("dense cap") {
  LoadOptions o;
  o.dense_cap = 11;
  CHECK_THROWS_AS(parse_scenario(demo_scenario_json(), o), CapExceeded);
  o.dense_cap = 12;
  CHECK_NOTHROW(parse_scenario(demo_scenario_json(), o));
}

TEST_CASE("matrix json round trip") {
  Matrix m(2, 2);
  m << Complex(1, 2), Complex(3, -4), 0.5, Complex(0, 1);
  CHECK(matrix_from_json(matrix_to_json(m), 2) == m);
  CHECK_THROWS_AS(matrix_from_json(matrix_to_json(m), 3), SchemaError);
}

TEST_CASE("suite selector filters by tag family") {
  const Scenario s = parse_scenario(demo_scenario_json());
  const VerificationReport r = run_suite(s, "spectral");
  REQUIRE_FALSE(r.checks.empty());
  for (const CheckRecord& c : r.checks) {
    const char f = c.tag.front();
    CHECK((f == 'T' || f == 'C' || f == 'P'));
    CHECK(c.tag[1] == '3');
  }
  CHECK_THROWS_AS(run_suite(s, "bogus"), SchemaError);
  CHECK_THROWS_AS(run_suite(parse_scenario(minimal()), "lagrangian"), SchemaError);
}

TEST_CASE("report lines are json with a summary") {
  const Scenario s = parse_scenario(demo_scenario_json());
  const std::string text = to_jsonl(run_suite(s, "dynamics"));
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  json last;
  while (std::getline(in, line)) {
    last = json::parse(line);
    ++n;
  }
  CHECK(last["summary"] == true);
  CHECK(last["checks"] == n - 1);
  CHECK(last["fingerprint"] == s.fingerprint);
  CHECK(text.find("runtime_ms") == std::string::npos);
}

TEST_CASE("compute emits identity for the empty set and obeys the group law") {
  const Scenario s = parse_scenario(demo_scenario_json());
  const json out = compute_operators(s, parse_subsets(s.grid->frame(), "{};1;2;1,2"), false);
  const auto& ops = out["operators"];
  REQUIRE(ops.size() == 4);
  for (const auto& z : ops[0]["diagonal"]) CHECK(z == json::array({1.0, 0.0}));
  double dev = 0;
  for (std::size_t x = 0; x < 12; ++x) {
    const Complex a(ops[1]["diagonal"][x][0], ops[1]["diagonal"][x][1]);
    const Complex b(ops[2]["diagonal"][x][0], ops[2]["diagonal"][x][1]);
    const Complex c(ops[3]["diagonal"][x][0], ops[3]["diagonal"][x][1]);
    dev = std::max(dev, std::abs(a * b - c));
  }
  CHECK(dev < 1e-12);
  CHECK_THROWS_AS(parse_subsets(s.grid->frame(), "1,9"), DomainError);
  const json dense = compute_operators(s, parse_subsets(s.grid->frame(), "1"), true);
  CHECK(dense["operators"][0]["form"] == "dense");
}

TEST_CASE("cli exit codes") {
  CHECK(run("demo") == 0);
  CHECK(run("verify demo --seed 42") == 0);
  CHECK(run("verify " + write_temp("evolint_bad.json", "{oops").string()) == 2);
  CHECK(run("verify " + write_temp("evolint_schema.json", R"({"algebra": {}})").string()) == 2);
  CHECK(run("verify /nonexistent/evolint.json") == 2);
  setenv("EVOLINT_DENSE_CAP", "5", 1);
  CHECK(run("verify demo") == 3);
  unsetenv("EVOLINT_DENSE_CAP");
  CHECK(run("compute demo --subsets 7") == 4);

  json j = minimal();
  j["frame"] = json::parse(R"({"times": [1, 2], "weights": ["1", "1"], "sigma0": [[], [1, 2]]})");
  j["grids"].push_back(j["grids"][0]);
  const auto p = write_temp("evolint_sigma.json", j.dump());
  CHECK(run("compute " + p.string() + " --subsets 1") == 4);
  CHECK(run("compute " + p.string() + " --subsets '1,2'") == 0);
}

TEST_CASE("failing checks give exit code 1") {
  // The action weight (1, -1) at T = {1} is set inconsistently with T = full.
  json j = minimal();
  j["grids"] = json::parse(R"([{"unitaries": [[[1,0],[0,0],[0,0],[1,0]], [[0,0],[1,0],[1,0],[0,0]]]}])");
  j["dynamics"] = json::parse(R"({"kind": "action_weight", "entries": [
      {"subset": [], "phases": ["0"]},
      {"subset": [1], "values": [[1, 0], [0.6, 0.8]]}]})");
  const auto p = write_temp("evolint_fail.json", j.dump());
  CHECK(run("verify " + p.string()) == 0);
  j["dynamics"]["entries"][1]["values"][1] = {2, 0};
  const auto q = write_temp("evolint_fail2.json", j.dump());
  CHECK(run("verify " + q.string()) == 1);
}

TEST_CASE("verify output is byte-identical across runs") {
  const auto dir = std::filesystem::temp_directory_path();
  REQUIRE(run("verify demo --seed 42 --out " + (dir / "evolint_r1.jsonl").string()) == 0);
  REQUIRE(run("verify demo --seed 42 --out " + (dir / "evolint_r2.jsonl").string()) == 0);
  CHECK(slurp(dir / "evolint_r1.jsonl") == slurp(dir / "evolint_r2.jsonl"));
}
