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

#include "qdfa/channel.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qdfa/rng.hpp"

namespace qdfa {

std::string to_string(Picture p) {
  return p == Picture::heisenberg ? "heisenberg" : "schrodinger";
}

std::string to_string(Representation r) {
  switch (r) {
    case Representation::kraus: return "kraus";
    case Representation::superop: return "superop";
    default: return "choi";
  }
}

Picture picture_from_string(const std::string& s) {
  if (s == "heisenberg") return Picture::heisenberg;
  if (s == "schrodinger") return Picture::schrodinger;
  throw InvalidInputError("unknown picture '" + s + "'");
}

Representation representation_from_string(const std::string& s) {
  if (s == "kraus") return Representation::kraus;
  if (s == "superop") return Representation::superop;
  if (s == "choi") return Representation::choi;
  throw InvalidInputError("unknown representation '" + s + "'");
}

CMatrix kraus_to_superop(const std::vector<CMatrix>& kraus, Picture picture) {
  if (kraus.empty()) throw InvalidInputError("kraus_to_superop: empty Kraus list");
  const Index d = kraus.front().rows();
  CMatrix s = CMatrix::Zero(d * d, d * d);
  for (const auto& k : kraus) {
    if (k.rows() != d || k.cols() != d)
      throw InvalidInputError("kraus_to_superop: Kraus operators must share a square shape");
    if (picture == Picture::heisenberg) {
      // vec(K^dag X K) = (K^T (x) K^dag) vec(X)
      s += Eigen::kroneckerProduct(k.transpose(), k.adjoint()).eval();
    } else {
      // vec(K X K^dag) = (conj(K) (x) K) vec(X)
      s += Eigen::kroneckerProduct(k.conjugate(), k).eval();
    }
  }
  return s;
}

CMatrix superop_to_choi(const CMatrix& superop) {
  const Index n = superop.rows();
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (d * d != n || superop.cols() != n)
    throw InvalidInputError("superop_to_choi: expected a d^2 x d^2 matrix");
  // C[(i,k),(j,l)] = Phi(E_ij)[k,l] = S[l*d+k, j*d+i]
  CMatrix choi(n, n);
  for (Index i = 0; i < d; ++i)
    for (Index k = 0; k < d; ++k)
      for (Index j = 0; j < d; ++j)
        for (Index l = 0; l < d; ++l) choi(i * d + k, j * d + l) = superop(l * d + k, j * d + i);
  return choi;
}

CMatrix choi_to_superop(const CMatrix& choi) {
  const Index n = choi.rows();
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (d * d != n || choi.cols() != n)
    throw InvalidInputError("choi_to_superop: expected a d^2 x d^2 matrix");
  CMatrix s(n, n);
  for (Index i = 0; i < d; ++i)
    for (Index k = 0; k < d; ++k)
      for (Index j = 0; j < d; ++j)
        for (Index l = 0; l < d; ++l) s(l * d + k, j * d + i) = choi(i * d + k, j * d + l);
  return s;
}

std::vector<CMatrix> choi_to_kraus(const CMatrix& choi, Picture picture, const Tolerances& tol,
                                   std::vector<std::string>* warnings) {
  const Index n = choi.rows();
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (d * d != n || choi.cols() != n)
    throw InvalidInputError("choi_to_kraus: expected a d^2 x d^2 matrix");
  Eigen::SelfAdjointEigenSolver<CMatrix> es((choi + choi.adjoint()) / 2.0);
  if (es.info() != Eigen::Success) throw NumericError("choi_to_kraus: eigensolver failure");
  const auto& ev = es.eigenvalues();
  const double top = std::max(0.0, ev.maxCoeff());
  const double cutoff = tol.psd * std::max(1.0, top);
  if (ev.minCoeff() < -cutoff)
    throw InvalidInputError("choi_to_kraus: Choi matrix is not PSD (min eigenvalue " +
                            std::to_string(ev.minCoeff()) + ")");
  if (ev.minCoeff() < 0 && warnings)
    warnings->push_back("choi_to_kraus: clamped negative Choi eigenvalues within tolerance (min " +
                        std::to_string(ev.minCoeff()) + ")");
  std::vector<CMatrix> kraus;
  for (Index a = 0; a < n; ++a) {
    if (ev(a) <= cutoff) continue;
    const double w = std::sqrt(ev(a));
    // Heisenberg side: Phi(E_ij)[k,l] = sum_a conj(K_a[i,k]) K_a[j,l] matches
    // C[(i,k),(j,l)] = sum_a w_a[(i,k)] conj(w_a[(j,l)]) with
    // K_a[i,k] = sqrt(ev_a) conj(w_a[i*d+k]).
    CMatrix k(d, d);
    for (Index i = 0; i < d; ++i)
      for (Index c = 0; c < d; ++c) k(i, c) = w * std::conj(es.eigenvectors()(i * d + c, a));
    if (picture == Picture::schrodinger) {
      // Schrodinger Choi convention is the same reshuffle of its superop;
      // rho -> sum K rho K^dag reproduces it with K_a[k,i] = sqrt(ev_a) w_a[i*d+k].
      k = k.conjugate().transpose().eval();
    }
    kraus.push_back(std::move(k));
  }
  if (kraus.empty()) kraus.push_back(CMatrix::Zero(d, d));
  return kraus;
}

namespace {

ValidationReport validate_map(const CMatrix& heis_superop, const CMatrix& choi,
                              const Tolerances& tol) {
  ValidationReport rep;
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(heis_superop.rows()))));
  const CMatrix phi_i = unvec(heis_superop * vec(identity(d)));
  rep.unitality_residual = operator_norm(phi_i - identity(d));
  rep.hermiticity_residual = (choi - choi.adjoint()).norm();
  Eigen::SelfAdjointEigenSolver<CMatrix> es((choi + choi.adjoint()) / 2.0);
  if (es.info() != Eigen::Success) throw NumericError("channel validation: eigensolver failure");
  rep.choi_min_eigenvalue = es.eigenvalues().minCoeff();
  rep.is_ucp = rep.unitality_residual <= tol.residual && rep.choi_min_eigenvalue >= -tol.psd;
  return rep;
}

}  // namespace

Channel Channel::from_superop(CMatrix superop, Picture picture, std::string label,
                              const Tolerances& tol, bool permissive) {
  tol.validate();
  const Index n = superop.rows();
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (n == 0 || d * d != n || superop.cols() != n)
    throw InvalidInputError("Channel: superoperator must be d^2 x d^2 with d >= 1");
  Channel ch;
  ch.dim_ = d;
  ch.picture_ = picture;
  ch.label_ = std::move(label);
  ch.tol_ = tol;
  ch.permissive_ = permissive;
  ch.superop_ = std::move(superop);
  ch.choi_ = superop_to_choi(ch.superop_);
  const CMatrix heis =
      picture == Picture::heisenberg ? ch.superop_ : CMatrix(ch.superop_.adjoint());
  ch.validation_ = validate_map(heis, ch.choi_, tol);
  if (!ch.validation_.is_ucp && !permissive)
    throw InvalidInputError(
        "Channel '" + ch.label_ + "' is not UCP (unitality residual " +
        std::to_string(ch.validation_.unitality_residual) + ", Choi min eigenvalue " +
        std::to_string(ch.validation_.choi_min_eigenvalue) + "); pass permissive to accept");
  if (ch.validation_.choi_min_eigenvalue >= -tol.psd &&
      ch.validation_.hermiticity_residual <= tol.residual * residual_scale({ch.choi_.norm()})) {
    ch.kraus_ = choi_to_kraus(ch.choi_, picture, tol, &ch.warnings_);
  }
  return ch;
}

Channel Channel::from_kraus(std::vector<CMatrix> kraus, Picture picture, std::string label,
                            const Tolerances& tol, bool permissive) {
  if (kraus.empty()) throw InvalidInputError("Channel: empty Kraus list");
  CMatrix s = kraus_to_superop(kraus, picture);
  Channel ch = from_superop(std::move(s), picture, std::move(label), tol, permissive);
  ch.kraus_ = std::move(kraus);  // keep the caller's operators
  return ch;
}

Channel Channel::from_choi(CMatrix choi, Picture picture, std::string label,
                           const Tolerances& tol, bool permissive) {
  CMatrix s = choi_to_superop(choi);
  return from_superop(std::move(s), picture, std::move(label), tol, permissive);
}

const std::vector<CMatrix>& Channel::kraus_ops() const {
  if (!kraus_)
    throw InvalidInputError("Channel '" + label_ + "': no Kraus form (map is not CP)");
  return *kraus_;
}

CMatrix Channel::heisenberg_superop() const {
  return picture_ == Picture::heisenberg ? superop_ : CMatrix(superop_.adjoint());
}

std::vector<CMatrix> Channel::heisenberg_kraus() const {
  if (picture_ == Picture::heisenberg) return kraus_ops();
  // Same operator list works in both pictures under the picture-dependent
  // convention; re-derive from the Heisenberg Choi to stay exact.
  std::vector<std::string> sink;
  return choi_to_kraus(superop_to_choi(heisenberg_superop()), Picture::heisenberg, tol_, &sink);
}

CMatrix Channel::apply(const CMatrix& X) const {
  if (X.rows() != dim_ || X.cols() != dim_)
    throw InvalidInputError("Channel::apply: shape mismatch");
  return unvec(superop_ * vec(X));
}

Channel Channel::adjoint() const {
  Channel ch;
  ch.dim_ = dim_;
  ch.picture_ = picture_ == Picture::heisenberg ? Picture::schrodinger : Picture::heisenberg;
  ch.label_ = label_ + "^dag";
  ch.tol_ = tol_;
  ch.permissive_ = permissive_;
  ch.superop_ = superop_.adjoint();
  ch.choi_ = superop_to_choi(ch.superop_);
  ch.validation_ = validation_;  // same map, dual description
  ch.kraus_ = kraus_;
  return ch;
}

Channel Channel::with_label(std::string label) const {
  Channel ch = *this;
  ch.label_ = std::move(label);
  return ch;
}

Channel compose(const Channel& a, const Channel& b) {
  if (a.dim() != b.dim()) throw InvalidInputError("compose: dimension mismatch");
  if (a.picture() != b.picture()) throw InvalidInputError("compose: picture mismatch");
  return Channel::from_superop(a.superop_matrix() * b.superop_matrix(), a.picture(),
                               a.label() + "." + b.label(), a.tolerances(),
                               a.permissive() || b.permissive());
}

Channel power(const Channel& ch, unsigned n) {
  const Index d = ch.dim();
  CMatrix acc = CMatrix::Identity(d * d, d * d);
  CMatrix base = ch.superop_matrix();
  unsigned k = n;
  while (k > 0) {
    if (k & 1u) acc = (acc * base).eval();
    base = (base * base).eval();
    k >>= 1u;
  }
  return Channel::from_superop(std::move(acc), ch.picture(),
                               ch.label() + "^" + std::to_string(n), ch.tolerances(),
                               ch.permissive());
}

Channel random_ucp(Index dim, Index env_dim, std::uint64_t seed, const Tolerances& tol) {
  if (dim < 1 || env_dim < 1) throw InvalidInputError("random_ucp: dims must be >= 1");
  Rng rng(seed);
  const CMatrix v = rng.isometry(dim * env_dim, dim);  // rows indexed by (s, e) = s*env+e
  std::vector<CMatrix> kraus;
  for (Index e = 0; e < env_dim; ++e) {
    CMatrix k(dim, dim);
    for (Index s = 0; s < dim; ++s) k.row(s) = v.row(s * env_dim + e);
    kraus.push_back(std::move(k));
  }
  return Channel::from_kraus(std::move(kraus), Picture::heisenberg,
                             "random_ucp(d=" + std::to_string(dim) +
                                 ",env=" + std::to_string(env_dim) +
                                 ",seed=" + std::to_string(seed) + ")",
                             tol);
}

Channel builtin_corner_projection(const Tolerances& tol) {
  CMatrix proj = CMatrix::Zero(3, 3);
  proj(0, 0) = proj(1, 1) = 1.0;
  CMatrix lift = CMatrix::Zero(3, 3);
  lift(0, 2) = 1.0;  // |1><3|: contributes x11 E33 under K^dag X K
  return Channel::from_kraus({proj, lift}, Picture::heisenberg, "corner_projection", tol);
}

Channel builtin_pinch_projection(const Tolerances& tol) {
  CMatrix e11 = CMatrix::Zero(3, 3), e22 = CMatrix::Zero(3, 3), lift = CMatrix::Zero(3, 3);
  e11(0, 0) = 1.0;
  e22(1, 1) = 1.0;
  lift(0, 2) = 1.0;
  return Channel::from_kraus({e11, e22, lift}, Picture::heisenberg, "pinch_projection", tol);
}

Channel builtin_pinched_relaxation(const Tolerances& tol) {
  const Channel pinch = builtin_pinch_projection(tol);
  const double w = std::exp(-1.0);
  CMatrix s = w * CMatrix::Identity(9, 9) + (1.0 - w) * pinch.superop_matrix();
  return Channel::from_superop(std::move(s), Picture::heisenberg, "pinched_relaxation", tol);
}

Channel builtin_trace_map(Index d, const Tolerances& tol) {
  if (d < 1) throw InvalidInputError("trace_map: d must be >= 1");
  CMatrix s = superop_from_map(d, [d](const CMatrix& x) {
    return CMatrix((x.trace() / static_cast<double>(d)) * identity(d));
  });
  return Channel::from_superop(std::move(s), Picture::heisenberg,
                               "trace_map(d=" + std::to_string(d) + ")", tol);
}

Channel builtin_state_contraction(const CMatrix& rho, const Tolerances& tol) {
  if (rho.rows() != rho.cols() || rho.rows() < 1)
    throw InvalidInputError("state_contraction: rho must be square");
  const Index d = rho.rows();
  if (std::abs(rho.trace() - Complex(1.0)) > tol.residual)
    throw InvalidInputError("state_contraction: rho must have unit trace");
  CMatrix s = superop_from_map(d, [&](const CMatrix& x) {
    return CMatrix((rho * x).trace() * identity(d));
  });
  return Channel::from_superop(std::move(s), Picture::heisenberg, "state_contraction", tol);
}

Channel builtin_unitary(const CMatrix& u, const Tolerances& tol) {
  if (u.rows() != u.cols() || u.rows() < 1)
    throw InvalidInputError("unitary: square matrix expected");
  if ((u.adjoint() * u - identity(u.rows())).norm() > tol.residual)
    throw InvalidInputError("unitary: matrix is not unitary");
  return Channel::from_kraus({u}, Picture::heisenberg, "unitary", tol);
}

Channel builtin(const std::string& name, const Tolerances& tol) {
  if (name == "corner_projection") return builtin_corner_projection(tol);
  if (name == "pinch_projection") return builtin_pinch_projection(tol);
  if (name == "pinched_relaxation") return builtin_pinched_relaxation(tol);
  if (name == "trace_map_d2") return builtin_trace_map(2, tol);
  if (name == "trace_map_d3") return builtin_trace_map(3, tol);
  if (name == "contraction_qubit") {
    CMatrix rho = CMatrix::Zero(2, 2);
    rho(0, 0) = 1.0;
    return builtin_state_contraction(rho, tol).with_label("contraction_qubit");
  }
  if (name == "unitary_phase") {
    CMatrix u = CMatrix::Zero(2, 2);
    u(0, 0) = 1.0;
    u(1, 1) = std::polar(1.0, M_PI * std::sqrt(2.0));
    return builtin_unitary(u, tol).with_label("unitary_phase");
  }
  throw InvalidInputError("unknown builtin channel '" + name + "'");
}

// ---- JSON ------------------------------------------------------------

namespace {

using nlohmann::json;

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InvalidInputError("channel JSON: complex entries must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InvalidInputError("channel JSON: matrix must be a non-empty array");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw InvalidInputError("channel JSON: ragged matrix rows");
    for (Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<size_t>(c)]);
  }
  return m;
}

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Channel channel_from_json_text(const std::string& text, bool permissive, const Tolerances& tol) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInputError(std::string("channel JSON parse error: ") + e.what());
  }
  for (const char* key : {"dim", "picture", "representation", "matrices"})
    if (!j.contains(key)) throw InvalidInputError(std::string("channel JSON: missing '") + key + "'");
  if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
    throw InvalidInputError("channel JSON: dim must be a positive integer");
  const Index d = j["dim"].get<Index>();
  const Picture picture = picture_from_string(j["picture"].get<std::string>());
  const Representation rep = representation_from_string(j["representation"].get<std::string>());
  const std::string label = j.value("label", std::string("channel"));
  if (!j["matrices"].is_array() || j["matrices"].empty())
    throw InvalidInputError("channel JSON: matrices must be a non-empty array");
  std::vector<CMatrix> mats;
  for (const auto& jm : j["matrices"]) mats.push_back(matrix_from_json(jm));
  switch (rep) {
    case Representation::kraus:
      for (const auto& m : mats)
        if (m.rows() != d || m.cols() != d)
          throw InvalidInputError("channel JSON: Kraus operators must be dim x dim");
      return Channel::from_kraus(std::move(mats), picture, label, tol, permissive);
    case Representation::superop:
      if (mats.size() != 1 || mats[0].rows() != d * d || mats[0].cols() != d * d)
        throw InvalidInputError("channel JSON: superop must be a single dim^2 x dim^2 matrix");
      return Channel::from_superop(std::move(mats[0]), picture, label, tol, permissive);
    case Representation::choi:
      if (mats.size() != 1 || mats[0].rows() != d * d || mats[0].cols() != d * d)
        throw InvalidInputError("channel JSON: choi must be a single dim^2 x dim^2 matrix");
      return Channel::from_choi(std::move(mats[0]), picture, label, tol, permissive);
  }
  throw InvalidInputError("channel JSON: unreachable representation");
}

Channel channel_from_json_file(const std::string& path, bool permissive, const Tolerances& tol) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open channel file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return channel_from_json_text(ss.str(), permissive, tol);
}

std::string channel_to_json_text(const Channel& ch, Representation rep) {
  json j;
  j["dim"] = ch.dim();
  j["picture"] = to_string(ch.picture());
  j["representation"] = to_string(rep);
  j["label"] = ch.label();
  json mats = json::array();
  switch (rep) {
    case Representation::kraus:
      for (const auto& k : ch.kraus_ops()) mats.push_back(matrix_to_json(k));
      break;
    case Representation::superop:
      mats.push_back(matrix_to_json(ch.superop_matrix()));
      break;
    case Representation::choi:
      mats.push_back(matrix_to_json(ch.choi_matrix()));
      break;
  }
  j["matrices"] = std::move(mats);
  return j.dump(2);
}

}  // namespace qdfa
