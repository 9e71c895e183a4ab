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

// Command-line front end. Everything numerical happens behind the C API;
// this file only parses flags, shuttles JSON, and maps statuses to exit
// codes: 0 ok, 1 invalid input, 2 check falsified, 3 numeric/consistency
// failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdfa/qdfa.h"

namespace {

struct CommonFlags {
  double tol = 0.0;
  double peripheral_tol = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool emit_bases = false;
  bool permissive = false;
  std::string report_path;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--tol", f.tol, "residual tolerance (default 1e-8)");
  cmd->add_option("--peripheral-tol", f.peripheral_tol,
                  "peripheral cluster tolerance (default 1e-7)");
  cmd->add_option("--trials", f.trials, "falsification trials (default 500)");
  cmd->add_option("--seed", f.seed, "random seed (default $QDFA_SEED or 1)")
      ->each([&f](const std::string&) { f.seed_set = true; });
  cmd->add_flag("--emit-bases", f.emit_bases, "include subspace bases in the JSON report");
  cmd->add_flag("--permissive", f.permissive, "accept validated non-UCP channels (tagged)");
  cmd->add_option("--report", f.report_path, "write the machine-readable JSON report here");
}

qdfa_options make_options(const CommonFlags& f) {
  qdfa_options opts;
  qdfa_options_init(&opts);
  if (f.tol > 0) opts.tol_residual = f.tol;
  if (f.peripheral_tol > 0) opts.tol_peripheral = f.peripheral_tol;
  if (f.trials > 0) opts.trials = f.trials;
  if (f.seed_set) {
    opts.seed = f.seed;
  } else if (const char* env = std::getenv("QDFA_SEED")) {
    opts.seed = std::strtoull(env, nullptr, 10);
  }
  opts.emit_bases = f.emit_bases ? 1 : 0;
  opts.permissive = f.permissive ? 1 : 0;
  return opts;
}

int fail(qdfa_status st) {
  std::cerr << "error: " << qdfa_last_error() << "\n";
  return static_cast<int>(st);
}

bool write_report(const std::string& path, const char* json) {
  if (path.empty()) return true;
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write report to '" << path << "'\n";
    return false;
  }
  out << json << "\n";
  return true;
}

int run_analyze(const std::string& input, const CommonFlags& flags, const std::string& expect) {
  const qdfa_options opts = make_options(flags);
  qdfa_channel* ch = nullptr;
  qdfa_status st = qdfa_channel_from_json_file(input.c_str(), &opts, &ch);
  if (st != QDFA_OK) return fail(st);
  qdfa_report* rep = nullptr;
  st = qdfa_analyze(ch, &opts, &rep);
  qdfa_channel_free(ch);
  if (st != QDFA_OK) return fail(st);
  std::cout << qdfa_report_summary(rep);
  const bool wrote = write_report(flags.report_path, qdfa_report_json(rep));
  int code = 0;
  if (!expect.empty()) {
    const std::string json = qdfa_report_json(rep);
    const auto j = nlohmann::json::parse(json);
    const std::string cls = j["asymptotic_class"].get<std::string>();
    std::string want = expect;
    for (auto& c : want)
      if (c == '-') c = '_';
    if (cls != want) {
      std::cerr << "expectation failed: asymptotic_class is '" << cls << "', expected '" << want
                << "'\n";
      code = 2;
    }
  }
  qdfa_report_free(rep);
  if (!wrote) return 3;
  return code;
}

int run_check(const std::string& input, const std::string& predicate, const CommonFlags& flags) {
  qdfa_options opts = make_options(flags);
  if (predicate == "ucp") opts.permissive = 1;  // answer the question instead of failing ingest
  qdfa_channel* ch = nullptr;
  qdfa_status st = qdfa_channel_from_json_file(input.c_str(), &opts, &ch);
  if (st != QDFA_OK) return fail(st);
  qdfa_report* rep = nullptr;
  st = qdfa_check(ch, predicate.c_str(), &opts, &rep);
  qdfa_channel_free(ch);
  if (st != QDFA_OK && st != QDFA_CHECK_FAILED) return fail(st);
  std::cout << qdfa_report_summary(rep);
  const bool wrote = write_report(flags.report_path, qdfa_report_json(rep));
  qdfa_report_free(rep);
  if (!wrote) return 3;
  return static_cast<int>(st);
}

int run_suite(const CommonFlags& flags, const std::vector<int>& dims, int per_dim) {
  const qdfa_options opts = make_options(flags);
  qdfa_report* rep = nullptr;
  const qdfa_status st = qdfa_run_suite(&opts, dims.empty() ? nullptr : dims.data(),
                                        static_cast<int>(dims.size()), per_dim, &rep);
  if (st != QDFA_OK && st != QDFA_CHECK_FAILED) return fail(st);
  std::cout << qdfa_report_summary(rep);
  const bool wrote = write_report(flags.report_path, qdfa_report_json(rep));
  qdfa_report_free(rep);
  if (!wrote) return 3;
  return static_cast<int>(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"asymptotic structure analysis for finite-dimensional quantum channels"};
  app.set_version_flag("--version", std::string(qdfa_version()));
  app.require_subcommand(1);

  std::string input, expect, predicate;
  CommonFlags aflags, cflags, sflags;
  std::vector<int> dims;
  int per_dim = 0;

  CLI::App* analyze = app.add_subcommand(
      "analyze", "run the full pipeline on a channel JSON file and print a summary");
  analyze->add_option("input", input, "channel JSON file")->required();
  analyze->add_option("--expect", expect,
                      "fail (exit 2) unless the asymptotic class matches: faithful | "
                      "peripherally-automorphic | generic");
  add_common(analyze, aflags);

  CLI::App* check = app.add_subcommand("check", "evaluate one predicate; exit 2 when it fails");
  check
      ->add_option("predicate", predicate,
                   "one of: ucp, faithful, peripherally-automorphic, schwarz-falsify")
      ->required();
  check->add_option("input", input, "channel JSON file")->required();
  add_common(check, cflags);

  CLI::App* suite = app.add_subcommand(
      "suite", "run the randomized invariant battery over built-ins plus a random corpus");
  suite->add_option("--dims", dims, "Hilbert-space dimensions for the random corpus (default 2 3 4)");
  suite->add_option("--seeds", per_dim, "random channels per dimension (default 70)");
  add_common(suite, sflags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // usage errors are invalid input
  }

  try {
    if (analyze->parsed()) return run_analyze(input, aflags, expect);
    if (check->parsed()) return run_check(input, predicate, cflags);
    if (suite->parsed()) return run_suite(sflags, dims, per_dim);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
