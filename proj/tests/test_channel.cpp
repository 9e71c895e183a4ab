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

#include <Eigen/Eigenvalues>
#include <fstream>

#include "qdfa/channel.hpp"
#include "qdfa/rng.hpp"
#include "test_helpers.hpp"

using namespace qdfa;
using namespace qdfa::test;

TEST_CASE("identity channel validates as UCP") {
  const Channel id = Channel::from_kraus({identity(2)}, Picture::heisenberg, "id");
  CHECK(id.validation().is_ucp);
  CHECK(id.validation().unitality_residual == doctest::Approx(0.0));
  CHECK((id.superop_matrix() - CMatrix::Identity(4, 4)).norm() == doctest::Approx(0.0));
}

TEST_CASE("corner projection is UCP with Choi rank 2") {
  const Channel p = builtin_corner_projection();
  CHECK(p.validation().is_ucp);
  CHECK(p.validation().choi_min_eigenvalue >= -1e-12);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(p.choi_matrix());
  int rank = 0;
  for (Index i = 0; i < 9; ++i)
    if (es.eigenvalues()(i) > 1e-9) ++rank;
  CHECK(rank == 2);
  // Kraus extraction keeps exactly the Choi rank.
  const auto kraus = choi_to_kraus(p.choi_matrix(), Picture::heisenberg, p.tolerances());
  CHECK(kraus.size() == 2);
}

TEST_CASE("transposition is non-CP and rejected without permissive") {
  CMatrix swap = CMatrix::Zero(4, 4);
  swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
  CHECK_THROWS_AS(Channel::from_superop(swap, Picture::heisenberg, "t"), InvalidInputError);
  const Channel t = transpose_channel();
  CHECK_FALSE(t.validation().is_ucp);
  // The Choi matrix of transposition is the swap operator: eigenvalues +-1.
  CHECK(t.validation().choi_min_eigenvalue == doctest::Approx(-1.0));
  CHECK_FALSE(t.has_kraus());
  CHECK_THROWS_AS(choi_to_kraus(t.choi_matrix(), Picture::heisenberg, t.tolerances()),
                  InvalidInputError);
}

TEST_CASE("conversions") {
  SUBCASE("unitary conjugation has Choi rank 1") {
    Rng rng(2);
    const Channel u = builtin_unitary(rng.haar_unitary(3));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(u.choi_matrix());
    int rank = 0;
    for (Index i = 0; i < 9; ++i)
      if (es.eigenvalues()(i) > 1e-9) ++rank;
    CHECK(rank == 1);
  }
  SUBCASE("round trip kraus -> superop -> choi -> kraus -> superop") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      for (Index d : {2, 3, 4}) {
        const Channel ch = random_ucp(d, 2, seed);
        const CMatrix s = ch.superop_matrix();
        const auto kraus = choi_to_kraus(superop_to_choi(s), Picture::heisenberg,
                                         ch.tolerances());
        const CMatrix s2 = kraus_to_superop(kraus, Picture::heisenberg);
        CHECK((s - s2).norm() < 1e-8 * s.norm());
      }
    }
  }
  SUBCASE("schrodinger kraus convention round-trips too") {
    Rng rng(9);
    const Channel heis = random_ucp(3, 2, 4);
    const Channel schro = heis.adjoint();
    const auto kraus = choi_to_kraus(schro.choi_matrix(), Picture::schrodinger,
                                     schro.tolerances());
    const CMatrix s2 = kraus_to_superop(kraus, Picture::schrodinger);
    CHECK((schro.superop_matrix() - s2).norm() < 1e-8);
  }
}

TEST_CASE("adjoint channel") {
  const Channel id = Channel::from_kraus({identity(2)}, Picture::heisenberg, "id");
  CHECK((id.adjoint().superop_matrix() - CMatrix::Identity(4, 4)).norm() == doctest::Approx(0.0));

  const Channel p = builtin_corner_projection();
  CHECK((p.adjoint().apply(identity(3)) - diag3(2, 1, 0)).norm() < 1e-12);
  CHECK(p.adjoint().picture() == Picture::schrodinger);
  CHECK((p.adjoint().adjoint().superop_matrix() - p.superop_matrix()).norm() <
        1e-14);

  SUBCASE("adjoint is the Hilbert-Schmidt dual on random probes") {
    Rng rng(21);
    const Channel ch = random_ucp(3, 2, 77);
    const Channel chd = ch.adjoint();
    for (int t = 0; t < 10; ++t) {
      const CMatrix a = rng.gaussian_matrix(3, 3), b = rng.gaussian_matrix(3, 3);
      const Complex lhs = hs_inner(ch.apply(a), b);
      const Complex rhs = hs_inner(a, chd.apply(b));
      CHECK(std::abs(lhs - rhs) < 1e-10);
    }
  }
}

TEST_CASE("compose and power") {
  const Channel p = builtin_corner_projection();
  SUBCASE("power zero is the identity channel") {
    const Channel one = power(p, 0);
    CHECK((one.superop_matrix() - CMatrix::Identity(9, 9)).norm() == doctest::Approx(0.0));
  }
  SUBCASE("the corner projection is idempotent") {
    CHECK((power(p, 2).superop_matrix() - p.superop_matrix()).norm() < 1e-14);
  }
  SUBCASE("composition of unitary conjugations follows the group law") {
    Rng rng(4);
    const CMatrix u = rng.haar_unitary(3), v = rng.haar_unitary(3);
    const Channel cu = builtin_unitary(u), cv = builtin_unitary(v);
    const Channel uv = compose(cu, cv);
    const Channel vu_conj = builtin_unitary(CMatrix(v * u));
    CHECK((uv.superop_matrix() - vu_conj.superop_matrix()).norm() < 1e-12);
  }
  SUBCASE("power is additive") {
    const Channel ch = random_ucp(3, 2, 5);
    const Channel lhs = power(ch, 7);
    const Channel rhs = compose(power(ch, 3), power(ch, 4));
    CHECK((lhs.superop_matrix() - rhs.superop_matrix()).norm() < 1e-10);
  }
  SUBCASE("mismatches are rejected") {
    CHECK_THROWS_AS(compose(p, random_ucp(2, 1, 1)), InvalidInputError);
    CHECK_THROWS_AS(compose(p, p.adjoint()), InvalidInputError);
  }
}

TEST_CASE("apply") {
  const Channel p = builtin_corner_projection();
  CHECK(p.apply(unit_matrix(3, 2, 2)).norm() == doctest::Approx(0.0));
  const Channel tm = builtin_trace_map(2);
  CMatrix x = CMatrix::Zero(2, 2);
  x(0, 0) = 1.0;
  CHECK((tm.apply(x) - 0.5 * identity(2)).norm() < 1e-14);
  CHECK_THROWS_AS(p.apply(identity(2)), InvalidInputError);
}

TEST_CASE("random_ucp") {
  SUBCASE("env_dim 1 gives a unitary conjugation") {
    const Channel ch = random_ucp(2, 1, 11);
    CHECK(ch.validation().is_ucp);
    const CMatrix s = ch.superop_matrix();
    CHECK((s.adjoint() * s - CMatrix::Identity(4, 4)).norm() < 1e-10);
  }
  SUBCASE("generic dims validate as UCP") {
    CHECK(random_ucp(3, 2, 12).validation().is_ucp);
    CHECK(random_ucp(4, 3, 13).validation().is_ucp);
  }
  SUBCASE("deterministic in the seed") {
    CHECK((random_ucp(3, 2, 99).superop_matrix() - random_ucp(3, 2, 99).superop_matrix())
              .norm() == doctest::Approx(0.0));
    CHECK((random_ucp(3, 2, 99).superop_matrix() - random_ucp(3, 2, 98).superop_matrix())
              .norm() > 1e-3);
  }
}

TEST_CASE("builtin channels") {
  SUBCASE("pinched relaxation spectrum is {1 x2, 1/e x7}") {
    const Channel ch = builtin_pinched_relaxation();
    Eigen::ComplexEigenSolver<CMatrix> es(ch.superop_matrix());
    int ones = 0, decays = 0;
    for (Index i = 0; i < 9; ++i) {
      if (std::abs(es.eigenvalues()(i) - Complex(1.0)) < 1e-10) ++ones;
      if (std::abs(es.eigenvalues()(i) - Complex(std::exp(-1.0))) < 1e-10) ++decays;
    }
    CHECK(ones == 2);
    CHECK(decays == 7);
  }
  SUBCASE("trace map is unital") {
    const Channel tm = builtin_trace_map(2);
    CHECK((tm.apply(identity(2)) - identity(2)).norm() < 1e-14);
    CHECK(tm.validation().is_ucp);
  }
  SUBCASE("state contraction requires a unit-trace state") {
    CHECK_THROWS_AS(builtin_state_contraction(2.0 * identity(2)), InvalidInputError);
    const Channel c = builtin_state_contraction(0.5 * identity(2));
    CHECK(c.validation().is_ucp);
  }
  SUBCASE("unknown builtin name") { CHECK_THROWS_AS(builtin("nope"), InvalidInputError); }
}

TEST_CASE("validation flag matches its defining formula") {
  const Channel cases[] = {builtin_corner_projection(), builtin_trace_map(3),
                           transpose_channel(), random_ucp(3, 2, 44)};
  for (const Channel& ch : cases) {
    const auto& v = ch.validation();
    const bool formula = v.unitality_residual <= ch.tolerances().residual &&
                         v.choi_min_eigenvalue >= -ch.tolerances().psd;
    CHECK(v.is_ucp == formula);
  }
}

TEST_CASE("hermiticity preservation on UCP channels") {
  Rng rng(31);
  for (std::uint64_t seed : {21ull, 22ull}) {
    const Channel ch = random_ucp(3, 2, seed);
    for (int t = 0; t < 5; ++t) {
      const CMatrix x = rng.gaussian_matrix(3, 3);
      CHECK((ch.apply(x).adjoint() - ch.apply(x.adjoint())).norm() < 1e-10);
    }
  }
}

TEST_CASE("channel JSON") {
  SUBCASE("round trip through text") {
    const Channel ch = random_ucp(3, 2, 8);
    for (Representation rep :
         {Representation::kraus, Representation::superop, Representation::choi}) {
      const std::string text = channel_to_json_text(ch, rep);
      const Channel back = channel_from_json_text(text, false);
      CHECK((back.heisenberg_superop() - ch.heisenberg_superop()).norm() < 1e-8);
    }
  }
  SUBCASE("fixtures agree with the builtins") {
    const std::string dir = fixtures_dir();
    const std::pair<std::string, Channel> cases[] = {
        {"corner_projection", builtin_corner_projection()},
        {"pinch_projection", builtin_pinch_projection()},
        {"pinched_relaxation", builtin_pinched_relaxation()},
        {"trace_map_d2", builtin_trace_map(2)},
        {"contraction_qubit", builtin("contraction_qubit")},
        {"unitary_phase", builtin("unitary_phase")},
    };
    for (const auto& [name, ch] : cases) {
      const Channel loaded = channel_from_json_file(dir + "/" + name + ".json", false);
      CHECK((loaded.superop_matrix() - ch.superop_matrix()).norm() < 1e-12);
    }
  }
  SUBCASE("malformed input") {
    CHECK_THROWS_AS(channel_from_json_text("{not json", false), InvalidInputError);
    CHECK_THROWS_AS(channel_from_json_text("{\"dim\": 2}", false), InvalidInputError);
    CHECK_THROWS_AS(channel_from_json_text(
                        R"({"dim":2,"picture":"heisenberg","representation":"superop",
                            "matrices":[[[[1,0]]]]})",
                        false),
                    InvalidInputError);
    CHECK_THROWS_AS(channel_from_json_file("/nonexistent/file.json", false), InvalidInputError);
  }
}
