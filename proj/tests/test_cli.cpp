// Copyright 2026 The qdfa authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <regex>
#include <sstream>
#include <string>

#include "test_helpers.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = qdfa::test::cli_path() + " " + args + " 2>&1";
  RunResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (fgets(buf.data(), buf.size(), pipe)) res.output += buf.data();
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string fixture(const std::string& name) {
  return qdfa::test::fixtures_dir() + "/" + name + ".json";
}

std::string strip_timestamp(std::string text) {
  const std::regex ts("\"generated_at\": \"[^\"]*\"");
  return std::regex_replace(text, ts, "\"generated_at\": \"\"");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("analyze: summary, report file, exit code") {
  const std::string report = "/tmp/qdfa_test_report.json";
  std::remove(report.c_str());
  const RunResult r = run_cli("analyze " + fixture("corner_projection") + " --trials 50 --report " + report);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("attr=4") != std::string::npos);
  CHECK(r.output.find("generic") != std::string::npos);
  const nlohmann::json j = nlohmann::json::parse(read_file(report));
  CHECK(j["dims"]["kernel"] == 1);
  CHECK(j["tool_version"] == "0.1.0");
  std::remove(report.c_str());
}

TEST_CASE("analyze: malformed input exits 1") {
  const std::string bad = "/tmp/qdfa_bad_input.json";
  std::ofstream(bad) << "{ not json";
  CHECK(run_cli("analyze " + bad).exit_code == 1);
  std::remove(bad.c_str());
  CHECK(run_cli("analyze /nonexistent.json").exit_code == 1);
}

TEST_CASE("analyze: non-UCP needs --permissive") {
  CHECK(run_cli("analyze " + fixture("transpose_d2")).exit_code == 1);
  const RunResult ok = run_cli("analyze --permissive --trials 50 " + fixture("transpose_d2"));
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("ucp: no") != std::string::npos);
}

TEST_CASE("analyze: --expect") {
  CHECK(run_cli("analyze --trials 20 --expect generic " + fixture("corner_projection")).exit_code ==
        0);
  CHECK(run_cli("analyze --trials 20 --expect faithful " + fixture("corner_projection"))
            .exit_code == 2);
  CHECK(run_cli("analyze --trials 20 --expect peripherally-automorphic " +
                fixture("pinched_relaxation"))
            .exit_code == 0);
  CHECK(run_cli("analyze --trials 20 --expect faithful " + fixture("pinched_relaxation"))
            .exit_code == 2);
}

TEST_CASE("check subcommand exit codes and witnesses") {
  CHECK(run_cli("check faithful --trials 20 " + fixture("unitary_phase")).exit_code == 0);
  const RunResult f = run_cli("check faithful --trials 20 " + fixture("pinched_relaxation"));
  CHECK(f.exit_code == 2);
  const RunResult pa = run_cli("check peripherally-automorphic --trials 20 " +
                               fixture("corner_projection"));
  CHECK(pa.exit_code == 2);
  CHECK(pa.output.find("witness basis pair") != std::string::npos);
  CHECK(run_cli("check ucp " + fixture("transpose_d2")).exit_code == 2);
  CHECK(run_cli("check ucp " + fixture("corner_projection")).exit_code == 0);
  const RunResult sf =
      run_cli("check schwarz-falsify --permissive --trials 300 " + fixture("transpose_d2"));
  CHECK(sf.exit_code == 0);
  CHECK(sf.output.find("violation found") != std::string::npos);
  CHECK(run_cli("check schwarz-falsify --trials 100 " + fixture("corner_projection")).exit_code ==
        2);
  CHECK(run_cli("check nonsense " + fixture("corner_projection")).exit_code == 1);
}

TEST_CASE("analyze report is deterministic modulo the timestamp") {
  const std::string r1 = "/tmp/qdfa_an_1.json", r2 = "/tmp/qdfa_an_2.json";
  const std::string common =
      "analyze " + fixture("pinched_relaxation") + " --trials 80 --seed 3 --report ";
  CHECK(run_cli(common + r1).exit_code == 0);
  CHECK(run_cli(common + r2).exit_code == 0);
  CHECK(strip_timestamp(read_file(r1)) == strip_timestamp(read_file(r2)));
  std::remove(r1.c_str());
  std::remove(r2.c_str());
}

TEST_CASE("suite subcommand determinism and exit code") {
  const std::string r1 = "/tmp/qdfa_suite_1.json", r2 = "/tmp/qdfa_suite_2.json";
  const std::string common = "suite --seeds 5 --trials 30 --seed 17 --dims 2 3 --report ";
  const RunResult a = run_cli(common + r1);
  CHECK(a.exit_code == 0);
  const RunResult b = run_cli(common + r2);
  CHECK(b.exit_code == 0);
  CHECK(strip_timestamp(read_file(r1)) == strip_timestamp(read_file(r2)));
  CHECK(read_file(r1).find("\"all_passed\": true") != std::string::npos);
  std::remove(r1.c_str());
  std::remove(r2.c_str());
}

TEST_CASE("seed falls back to QDFA_SEED") {
  // Two suite runs picking up the same environment seed must agree.
  const std::string r1 = "/tmp/qdfa_env_1.json", r2 = "/tmp/qdfa_env_2.json";
  const std::string prefix = "env QDFA_SEED=99 " + qdfa::test::cli_path();
  for (const auto& [path, _] : {std::pair{r1, 0}, std::pair{r2, 0}}) {
    const std::string cmd =
        prefix + " suite --seeds 4 --trials 20 --dims 2 --report " + path + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    while (fgets(buf.data(), buf.size(), pipe)) {
    }
    CHECK(WEXITSTATUS(pclose(pipe)) == 0);
  }
  const nlohmann::json j1 = nlohmann::json::parse(read_file(r1));
  CHECK(j1["seed"] == 99);
  CHECK(strip_timestamp(read_file(r1)) == strip_timestamp(read_file(r2)));
  std::remove(r1.c_str());
  std::remove(r2.c_str());
}

TEST_CASE("numeric failures exit 3") {
  // A permissive map with a genuine Jordan block on the unit circle loads,
  // but the spectral analysis must refuse it as a numeric/diagnostic failure.
  const std::string path = "/tmp/qdfa_jordan.json";
  std::ofstream(path) << R"({
    "dim": 2, "picture": "heisenberg", "representation": "superop",
    "label": "jordan",
    "matrices": [[
      [[1,0],[1,0],[0,0],[0,0]],
      [[0,0],[1,0],[0,0],[0,0]],
      [[0,0],[0,0],[0.5,0],[0,0]],
      [[0,0],[0,0],[0,0],[1,0]]
    ]]})";
  const RunResult r = run_cli("analyze --permissive " + path);
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("not semisimple") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("usage errors exit 1") {
  CHECK(run_cli("").exit_code == 1);
  CHECK(run_cli("analyze").exit_code == 1);
  CHECK(run_cli("frobnicate x.json").exit_code == 1);
}
