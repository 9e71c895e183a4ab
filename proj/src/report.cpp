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

#include "qdfa/report.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace qdfa {

namespace {

using nlohmann::json;

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json subspace_to_json(const OperatorSubspace& s) {
  json basis = json::array();
  for (const auto& b : s.basis()) basis.push_back(matrix_to_json(b));
  return json{{"dim", s.dim()}, {"basis", std::move(basis)}};
}

std::vector<Complex> sorted_spectrum(const CVector& ev) {
  std::vector<Complex> v(ev.data(), ev.data() + ev.size());
  std::sort(v.begin(), v.end(), [](const Complex& a, const Complex& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma > mb;
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return v;
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

json positivity_to_json(const PositivityReport& p) {
  json j;
  j["is_cp"] = p.is_cp;
  j["choi_min_eigenvalue"] = p.choi_min_eigenvalue;
  j["classification"] = p.classification;
  j["trials"] = p.trials;
  j["seed"] = p.seed;
  if (p.schwarz_violation) {
    j["schwarz_violation"] = {{"min_eigenvalue", p.schwarz_violation->min_eigenvalue},
                              {"witness", matrix_to_json(p.schwarz_violation->witness)}};
  }
  if (p.star_schwarz_violation) {
    j["star_schwarz_violation"] = {
        {"min_eigenvalue", p.star_schwarz_violation->min_eigenvalue},
        {"witness", matrix_to_json(p.star_schwarz_violation->witness)}};
  }
  return j;
}

}  // namespace

std::string report_to_json_text(const ReportDocument& doc) {
  json j;
  j["tool_version"] = doc.tool_version;
  j["generated_at"] = iso_timestamp();
  j["channel_label"] = doc.channel_label;
  j["tolerances"] = {{"ortho", doc.tolerances.ortho},
                     {"psd", doc.tolerances.psd},
                     {"residual", doc.tolerances.residual},
                     {"peripheral", doc.tolerances.peripheral}};

  json spec = json::array();
  for (const auto& z : sorted_spectrum(doc.spectral.eigenvalues)) spec.push_back(complex_to_json(z));
  j["spectrum"] = std::move(spec);
  json peri = json::array();
  CVector pev = doc.spectral.eigenvalues.head(doc.spectral.peripheral_count);
  for (const auto& z : sorted_spectrum(pev)) peri.push_back(complex_to_json(z));
  j["peripheral_eigenvalues"] = std::move(peri);
  j["semisimplicity_residual"] = doc.spectral.semisimplicity_residual;

  const AnalysisReport& a = doc.analysis;
  j["dims"] = {{"attr", a.dims.attr},
               {"fix", a.dims.fix},
               {"ce_dfa", a.dims.ce_dfa},
               {"kernel", a.dims.kernel_ideal}};
  if (a.dims.dfa)
    j["dims"]["dfa"] = *a.dims.dfa;
  else
    j["dims"]["dfa"] = nullptr;
  j["flags"] = {{"is_ucp", doc.data ? doc.data->channel.validation().is_ucp : true},
                {"faithful", a.faithful},
                {"peripherally_automorphic", a.peripherally_automorphic},
                {"nstar_star_unit", a.nstar_star_unit_exists}};
  j["asymptotic_class"] = to_string(a.asymptotic_class);
  j["support_dim"] = a.support_dim;
  j["stationary_state"] = matrix_to_json(a.stationary_state);

  json residuals;
  for (const auto& [name, value] : a.invariant_residuals) residuals[name] = value;
  j["residuals"] = std::move(residuals);

  j["positivity"] = positivity_to_json(doc.positivity);

  if (doc.data && !doc.data->channel.warnings().empty()) {
    json w = json::array();
    for (const auto& msg : doc.data->channel.warnings()) w.push_back(msg);
    j["warnings"] = std::move(w);
  }

  if (doc.emit_bases && doc.data) {
    json bases;
    bases["attractor"] = subspace_to_json(doc.data->pd.attractor);
    bases["fixed_points"] = subspace_to_json(doc.data->fix);
    if (doc.data->dfa_space) bases["dfa"] = subspace_to_json(*doc.data->dfa_space);
    bases["kernel_ideal"] = subspace_to_json(doc.data->kernel);
    bases["ce_dfa"] = subspace_to_json(doc.data->nstar);
    j["bases"] = std::move(bases);
  }
  return j.dump(2);
}

std::string report_summary_text(const ReportDocument& doc) {
  const AnalysisReport& a = doc.analysis;
  std::ostringstream ss;
  ss << "channel: " << doc.channel_label << "\n";
  if (doc.data) {
    const auto& v = doc.data->channel.validation();
    ss << "  ucp: " << (v.is_ucp ? "yes" : "no")
       << " (unitality " << std::scientific << std::setprecision(2) << v.unitality_residual
       << ", choi min eig " << v.choi_min_eigenvalue << ")\n";
  }
  ss << "  dims: attr=" << a.dims.attr << " fix=" << a.dims.fix;
  if (a.dims.dfa)
    ss << " dfa=" << *a.dims.dfa;
  else
    ss << " dfa=n/a";
  ss << " ce_dfa=" << a.dims.ce_dfa << " kernel=" << a.dims.kernel_ideal << "\n";
  ss << "  class: " << to_string(a.asymptotic_class)
     << " (faithful=" << (a.faithful ? "yes" : "no")
     << ", peripherally_automorphic=" << (a.peripherally_automorphic ? "yes" : "no") << ")\n";
  ss << "  support dim: " << a.support_dim << " of " << a.stationary_state.rows() << "\n";
  ss << "  positivity: " << doc.positivity.classification;
  if (doc.positivity.schwarz_violation)
    ss << " (violation min eig " << std::setprecision(3)
       << doc.positivity.schwarz_violation->min_eigenvalue << ")";
  ss << "\n";
  double worst = 0.0;
  std::string worst_name;
  for (const auto& [name, value] : a.invariant_residuals) {
    if (name.starts_with("margin_") || name.ends_with("_unenforced")) continue;
    if (value > worst) worst = value, worst_name = name;
  }
  ss << "  worst residual: " << std::scientific << std::setprecision(2) << worst;
  if (!worst_name.empty()) ss << " (" << worst_name << ")";
  ss << "\n";
  return ss.str();
}

}  // namespace qdfa
