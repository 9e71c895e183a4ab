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

// End-to-end acceptance battery. Each criterion prints one pass/fail line;
// the process exits nonzero if any fails.

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <regex>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qdfa/algebra.hpp"
#include "qdfa/positivity.hpp"
#include "qdfa/rng.hpp"
#include "qdfa/suite.hpp"
#include "test_helpers.hpp"

using namespace qdfa;
using namespace qdfa::test;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& text, const std::function<void()>& body) {
  try {
    body();
    std::printf("PASS  criterion %d: %s\n", number, text.c_str());
  } catch (const std::exception& e) {
    ++g_failures;
    std::printf("FAIL  criterion %d: %s\n        %s\n", number, text.c_str(), e.what());
  }
  std::fflush(stdout);
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

void require_le(double value, double bound, const std::string& what) {
  if (!(value <= bound))
    throw std::runtime_error(what + " = " + std::to_string(value) + " exceeds " +
                             std::to_string(bound));
}

std::string run_cli_capture(const std::string& args, int* exit_code) {
  const std::string cmd = cli_path() + " " + args + " 2>&1";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  require(pipe != nullptr, "cannot launch the CLI");
  std::array<char, 4096> buf{};
  while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  const int status = pclose(pipe);
  *exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  const Tolerances tol;

  criterion(1, "corner projection reproduces dims (4,3,5,1), flags, and all four subspaces",
            [&] {
    const AnalysisData data = classify(builtin_corner_projection());
    require(data.report.dims.attr == 4, "attr dim");
    require(data.report.dims.dfa && *data.report.dims.dfa == 3, "dfa dim");
    require(data.report.dims.ce_dfa == 5, "ce_dfa dim");
    require(data.report.dims.kernel_ideal == 1, "kernel dim");
    require(!data.report.peripherally_automorphic, "peripherally_automorphic flag");
    require(!data.report.faithful, "faithful flag");
    require_le(projector_distance(data.pd.attractor, corner_attractor_space(tol)), 1e-8,
               "attractor projector distance");
    require(data.dfa_space.has_value(), "dfa computed");
    require_le(projector_distance(*data.dfa_space, diagonal_space(3, tol)), 1e-8,
               "dfa projector distance");
    require_le(projector_distance(data.nstar, corner_nstar_space(tol)), 1e-8,
               "ce_dfa projector distance");
    const OperatorSubspace kernel_ref =
        OperatorSubspace::from_spanning(3, {unit_matrix(3, 2, 2)}, tol);
    require_le(projector_distance(data.kernel, kernel_ref), 1e-8,
               "kernel projector distance");
  });

  criterion(2,
            "pinched relaxation: spectrum {1 x2, 1/e x7}, projector = pinch, dims (2,2,3,1), "
            "peripherally automorphic without faithfulness",
            [&] {
    const Channel ch = builtin_pinched_relaxation();
    const AnalysisData data = classify(ch);
    int ones = 0, decays = 0;
    for (Index i = 0; i < data.sd.eigenvalues.size(); ++i) {
      if (std::abs(data.sd.eigenvalues(i) - Complex(1.0)) <= 1e-8) ++ones;
      if (std::abs(data.sd.eigenvalues(i) - Complex(std::exp(-1.0))) <= 1e-8) ++decays;
    }
    require(ones == 2 && decays == 7, "spectrum multiplicities");
    require_le((data.pd.projector_superop - builtin_pinch_projection().superop_matrix()).norm(),
               1e-8, "projector distance to the pinch");
    require(data.report.dims.attr == 2, "attr dim");
    require(data.report.dims.dfa && *data.report.dims.dfa == 2, "dfa dim");
    require(data.report.dims.ce_dfa == 3, "ce_dfa dim");
    require(data.report.dims.kernel_ideal == 1, "kernel dim");
    require(data.report.peripherally_automorphic, "peripherally automorphic");
    require(!data.report.faithful, "not faithful");
    require(data.dfa_space.has_value() &&
                projector_distance(*data.dfa_space, data.pd.attractor) <= 1e-8,
            "Attr = N without faithfulness");
  });

  criterion(3,
            "qubit laws on 60 seeded random channels: peripheral automorphism everywhere; "
            "non-faithful ones contract to tr(rho X) I with stationary rho",
            [&] {
    int non_faithful = 0;
    Rng probe_rng(99);
    for (int i = 0; i < 60; ++i) {
      Channel ch = [&]() {
        switch (i % 3) {
          case 0: return random_ucp(2, 1 + (i % 2) * 2, 7000 + i, tol);
          case 1: {
            // block construction: phase on a 1-dim subspace + contraction
            Rng rng(8000 + i);
            CMatrix k0 = CMatrix::Zero(2, 2);
            k0(0, 0) = std::polar(1.0, rng.uniform() * 6.28);
            CMatrix k1 = CMatrix::Zero(2, 2);
            k1(0, 1) = 1.0;
            return Channel::from_kraus({k0, k1}, Picture::heisenberg,
                                       "accept_block_" + std::to_string(i), tol);
          }
          default: {
            Rng rng(9000 + i);
            const CMatrix raw = rng.psd_matrix(2);
            return compose(builtin_unitary(rng.haar_unitary(2), tol),
                           builtin_state_contraction(CMatrix(raw / raw.trace().real()), tol));
          }
        }
      }();
      const AnalysisData data = classify(ch);
      require(data.report.peripherally_automorphic,
              "qubit channel " + std::to_string(i) + " not peripherally automorphic");
      if (data.report.faithful) continue;
      ++non_faithful;
      require(data.report.dims.attr == 1,
              "non-faithful qubit " + std::to_string(i) + " attractor dim");
      const CMatrix rho = data.faith.sigma;
      for (int t = 0; t < 5; ++t) {
        const CMatrix x = probe_rng.gaussian_matrix(2, 2);
        const Complex w = (rho * x).trace();
        require_le((project_peripheral(data.pd, x) - w * identity(2)).norm() /
                       std::max(1.0, x.norm()),
                   1e-7, "projector contraction probe");
      }
      require_le((unvec(ch.heisenberg_superop().adjoint() * vec(rho)) - rho).norm(), 1e-8,
                 "rho stationarity");
    }
    require(non_faithful >= 5, "too few non-faithful qubit channels to be meaningful");
  });

  criterion(4,
            "invariant battery: built-ins plus 210 random channels (d <= 4) pass every law, "
            "with the direct-sum dimension identity exact",
            [&] {
    SuiteOptions opts;
    opts.seed = 1;
    opts.random_per_dim = 70;
    opts.trials = 500;
    const std::vector<Channel> corpus = build_corpus(opts);
    require(corpus.size() >= 207, "corpus size");
    const auto results = run_invariant_suite(corpus, opts);
    for (const auto& r : results)
      require(r.passed, "invariant '" + r.name + "' failed with residual " +
                            std::to_string(r.worst_residual) + " (witness " + r.witness + ")");
    for (const auto& r : results)
      if (r.name == "direct_sum")
        require(r.worst_residual == 0.0, "direct-sum identity must be exact");
  });

  criterion(5,
            "the corner projection violates the C*-identity on its Choi-Effros algebra with "
            "projected norm 1 against 25, while the identity holds on the attractor",
            [&] {
    const Channel p = builtin_corner_projection();
    const PeripheralData pd = peripheral_projection(p);
    const CMatrix x = diag3(1, 1, 5);
    const double lhs = operator_norm(project_peripheral(pd, CMatrix(x.adjoint() * x)));
    const double rhs = operator_norm(x);
    require_le(std::abs(lhs - 1.0), 1e-10, "projected norm deviation from 1");
    require_le(std::abs(rhs * rhs - 25.0), 1e-10, "squared norm deviation from 25");
    Rng rng(5);
    for (int t = 0; t < 10; ++t) {
      CMatrix a = CMatrix::Zero(3, 3);
      for (Index i = 0; i < pd.attractor.dim(); ++i)
        a += rng.cgauss() * pd.attractor.basis()[static_cast<size_t>(i)];
      const double na = operator_norm(a);
      require_le(std::abs(operator_norm(choi_effros_product(pd, a.adjoint(), a)) - na * na),
                 1e-8 * std::max(1.0, na * na), "C*-identity residual on the attractor");
    }
  });

  criterion(6,
            "trace-map associativity witness: (X*Y)*Z = 0 and X*(Y*Z) = I/4 to 1e-12",
            [&] {
    const Channel tm = builtin_trace_map(2);
    const PeripheralData pd = peripheral_projection(tm);
    CMatrix x = CMatrix::Zero(2, 2), z = CMatrix::Zero(2, 2);
    x(0, 0) = 1.0;
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    const CMatrix left = choi_effros_product(pd, choi_effros_product(pd, x, x), z);
    const CMatrix right = choi_effros_product(pd, x, choi_effros_product(pd, x, z));
    require_le(left.norm(), 1e-12, "(X*Y)*Z");
    require_le((right - 0.25 * identity(2)).norm(), 1e-12, "X*(Y*Z) - I/4");
  });

  criterion(7,
            "the three faithfulness criteria agree on every corpus channel",
            [&] {
    SuiteOptions opts;
    opts.seed = 2;
    opts.random_per_dim = 24;
    const std::vector<Channel> corpus = build_corpus(opts);
    AnalyzeOptions aopts;
    aopts.seed = 2;
    for (const auto& ch : corpus) {
      const AnalysisData data = classify(ch, aopts);
      const bool f1 = data.faith.faithful;
      const bool f2 = data.kernel.dim() == 0;
      const bool f3 = subspace_equal(data.pd.attractor, data.nstar, tol);
      require(f1 == f2 && f1 == f3,
              "criteria disagree on " + ch.label() + ": " + std::to_string(f1) + "/" +
                  std::to_string(f2) + "/" + std::to_string(f3));
    }
  });

  criterion(8,
            "transposition yields a verified Schwarz counterexample (<= -0.1, re-verified to "
            "1e-12); no UCP corpus channel is falsified in 500 trials",
            [&] {
    const Channel t = transpose_channel(tol);
    const PositivityReport rep = falsify_schwarz(t, 500, 1);
    require(rep.schwarz_violation.has_value(), "no counterexample found");
    require_le(rep.schwarz_violation->min_eigenvalue, -0.1, "violation magnitude");
    const CMatrix& x = rep.schwarz_violation->witness;
    const CMatrix defect = t.apply(CMatrix(x.adjoint() * x)) - t.apply(x).adjoint() * t.apply(x);
    Eigen::SelfAdjointEigenSolver<CMatrix> es((defect + defect.adjoint()) / 2.0);
    require_le(std::abs(es.eigenvalues().minCoeff() - rep.schwarz_violation->min_eigenvalue),
               1e-12 * std::max(1.0, std::abs(rep.schwarz_violation->min_eigenvalue)),
               "certificate re-verification");
    for (std::uint64_t seed : {201ull, 202ull, 203ull, 204ull}) {
      for (Index d : {2, 3}) {
        const Channel ch = random_ucp(d, 2, seed);
        require(!falsify_schwarz(ch, 500, seed).schwarz_violation.has_value(),
                "UCP channel falsified: " + ch.label());
      }
    }
  });

  criterion(9, "two CLI suite runs with the same seed produce identical reports", [&] {
    const std::string r1 = "/tmp/qdfa_accept_suite1.json", r2 = "/tmp/qdfa_accept_suite2.json";
    int code1 = -1, code2 = -1;
    run_cli_capture("suite --seeds 6 --trials 60 --seed 5 --dims 2 3 --report " + r1, &code1);
    run_cli_capture("suite --seeds 6 --trials 60 --seed 5 --dims 2 3 --report " + r2, &code2);
    require(code1 == 0 && code2 == 0, "suite exit codes");
    const std::regex ts("\"generated_at\": \"[^\"]*\"");
    const std::string a = std::regex_replace(read_file(r1), ts, "");
    const std::string b = std::regex_replace(read_file(r2), ts, "");
    require(a == b, "reports differ beyond the timestamp");
    require(a.find("\"all_passed\": true") != std::string::npos, "suite did not pass");
    std::remove(r1.c_str());
    std::remove(r2.c_str());
  });

  if (g_failures == 0)
    std::printf("acceptance: all 9 criteria passed\n");
  else
    std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
