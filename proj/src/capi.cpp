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

#include "qdfa/qdfa.h"

#include <cstring>
#include <memory>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qdfa/algebra.hpp"
#include "qdfa/channel.hpp"
#include "qdfa/positivity.hpp"
#include "qdfa/report.hpp"
#include "qdfa/suite.hpp"

using namespace qdfa;

struct qdfa_channel {
  Channel ch;
};

struct qdfa_report {
  std::string json;
  std::string summary;
};

namespace {

thread_local std::string g_last_error;

qdfa_status status_from_error(const Error& e) {
  g_last_error = e.what();
  switch (e.kind()) {
    case ErrorKind::invalid_input: return QDFA_ERR_INVALID_INPUT;
    case ErrorKind::numeric_failure:
    case ErrorKind::consistency: return QDFA_ERR_NUMERIC;
  }
  return QDFA_ERR_NUMERIC;
}

qdfa_status guard_failure(std::exception_ptr ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const Error& e) {
    return status_from_error(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QDFA_ERR_NUMERIC;
  } catch (...) {
    g_last_error = "unknown failure";
    return QDFA_ERR_NUMERIC;
  }
}

Tolerances tolerances_from(const qdfa_options* opts) {
  Tolerances tol;
  if (!opts) return tol;
  if (opts->tol_ortho > 0) tol.ortho = opts->tol_ortho;
  if (opts->tol_psd > 0) tol.psd = opts->tol_psd;
  if (opts->tol_residual > 0) tol.residual = opts->tol_residual;
  if (opts->tol_peripheral > 0) tol.peripheral = opts->tol_peripheral;
  return tol;
}

AnalyzeOptions analyze_options_from(const qdfa_options* opts) {
  AnalyzeOptions a;
  a.tol = tolerances_from(opts);
  if (opts) {
    a.seed = opts->seed;
    if (opts->trials > 0) a.trials = opts->trials;
  }
  return a;
}

qdfa_report* make_report(std::string json, std::string summary) {
  return new qdfa_report{std::move(json), std::move(summary)};
}

ReportDocument build_document(const AnalysisData& data, const PositivityReport& pos,
                              const AnalyzeOptions& aopts, bool emit_bases) {
  ReportDocument doc;
  doc.channel_label = data.channel.label();
  doc.tolerances = aopts.tol;
  doc.spectral = data.sd;
  doc.analysis = data.report;
  doc.positivity = pos;
  doc.emit_bases = emit_bases;
  doc.data = &data;
  return doc;
}

}  // namespace

extern "C" {

void qdfa_options_init(qdfa_options* opts) {
  if (!opts) return;
  std::memset(opts, 0, sizeof(*opts));
  Tolerances tol;
  opts->tol_ortho = tol.ortho;
  opts->tol_psd = tol.psd;
  opts->tol_residual = tol.residual;
  opts->tol_peripheral = tol.peripheral;
  opts->seed = 1;
  opts->trials = 500;
}

const char* qdfa_version(void) { return kToolVersion; }

const char* qdfa_last_error(void) { return g_last_error.c_str(); }

qdfa_status qdfa_channel_from_json(const char* json_text, const qdfa_options* opts,
                                   qdfa_channel** out) {
  if (!json_text || !out) {
    g_last_error = "null argument";
    return QDFA_ERR_INVALID_INPUT;
  }
  *out = nullptr;
  try {
    const bool permissive = opts && opts->permissive;
    Channel ch = channel_from_json_text(json_text, permissive, tolerances_from(opts));
    *out = new qdfa_channel{std::move(ch)};
    return QDFA_OK;
  } catch (...) {
    return guard_failure(std::current_exception());
  }
}

qdfa_status qdfa_channel_from_json_file(const char* path, const qdfa_options* opts,
                                        qdfa_channel** out) {
  if (!path || !out) {
    g_last_error = "null argument";
    return QDFA_ERR_INVALID_INPUT;
  }
  *out = nullptr;
  try {
    const bool permissive = opts && opts->permissive;
    Channel ch = channel_from_json_file(path, permissive, tolerances_from(opts));
    *out = new qdfa_channel{std::move(ch)};
    return QDFA_OK;
  } catch (...) {
    return guard_failure(std::current_exception());
  }
}

void qdfa_channel_free(qdfa_channel* ch) { delete ch; }

int qdfa_channel_dim(const qdfa_channel* ch) { return ch ? static_cast<int>(ch->ch.dim()) : 0; }

int qdfa_channel_is_ucp(const qdfa_channel* ch) {
  return ch && ch->ch.validation().is_ucp ? 1 : 0;
}

const char* qdfa_channel_label(const qdfa_channel* ch) {
  return ch ? ch->ch.label().c_str() : "";
}

qdfa_status qdfa_analyze(const qdfa_channel* ch, const qdfa_options* opts, qdfa_report** out) {
  if (!ch || !out) {
    g_last_error = "null argument";
    return QDFA_ERR_INVALID_INPUT;
  }
  *out = nullptr;
  try {
    const AnalyzeOptions aopts = analyze_options_from(opts);
    const AnalysisData data = classify(ch->ch, aopts);
    PositivityReport pos = falsify_schwarz(ch->ch, aopts.trials, aopts.seed);
    const PositivityReport star =
        falsify_star_schwarz(ch->ch, data.pd, aopts.trials, aopts.seed + 1);
    pos.star_schwarz_violation = star.star_schwarz_violation;
    const ReportDocument doc =
        build_document(data, pos, aopts, opts && opts->emit_bases);
    *out = make_report(report_to_json_text(doc), report_summary_text(doc));
    return QDFA_OK;
  } catch (...) {
    return guard_failure(std::current_exception());
  }
}

qdfa_status qdfa_check(const qdfa_channel* ch, const char* predicate, const qdfa_options* opts,
                       qdfa_report** out) {
  if (!ch || !predicate || !out) {
    g_last_error = "null argument";
    return QDFA_ERR_INVALID_INPUT;
  }
  *out = nullptr;
  const std::string pred = predicate;
  try {
    const AnalyzeOptions aopts = analyze_options_from(opts);
    std::ostringstream summary;
    bool holds = false;
    std::string witness_json = "{}";
    if (pred == "ucp") {
      const auto& v = ch->ch.validation();
      holds = v.is_ucp;
      summary << "ucp: " << (holds ? "yes" : "no") << " (unitality residual "
              << v.unitality_residual << ", choi min eigenvalue " << v.choi_min_eigenvalue
              << ")\n";
      witness_json = std::string("{\"predicate\":\"ucp\",\"holds\":") +
                     (holds ? "true" : "false") + "}";
    } else if (pred == "faithful" || pred == "peripherally-automorphic") {
      const AnalysisData data = classify(ch->ch, aopts);
      if (pred == "faithful") {
        holds = data.report.faithful;
        summary << "faithful: " << (holds ? "yes" : "no") << "\n";
        summary << "stationary state sigma (support dim " << data.report.support_dim << " of "
                << ch->ch.dim() << "):\n";
        const CMatrix& s = data.report.stationary_state;
        for (Index r = 0; r < s.rows(); ++r) {
          summary << "  ";
          for (Index c = 0; c < s.cols(); ++c)
            summary << "(" << s(r, c).real() << (s(r, c).imag() < 0 ? "" : "+")
                    << s(r, c).imag() << "i) ";
          summary << "\n";
        }
      } else {
        holds = data.report.peripherally_automorphic;
        summary << "peripherally-automorphic: " << (holds ? "yes" : "no") << "\n";
        if (!holds) {
          summary << "witness basis pair (" << data.pa.witness_i << ", " << data.pa.witness_j
                  << ") with residual " << data.pa.max_residual << "\n";
        }
      }
      const PositivityReport pos = certify_cp(ch->ch);
      const ReportDocument doc = build_document(data, pos, aopts, opts && opts->emit_bases);
      witness_json = report_to_json_text(doc);
      *out = make_report(std::move(witness_json), summary.str());
      return holds ? QDFA_OK : QDFA_CHECK_FAILED;
    } else if (pred == "schwarz-falsify") {
      const PositivityReport rep = falsify_schwarz(ch->ch, aopts.trials, aopts.seed);
      holds = rep.schwarz_violation.has_value();  // "holds" = counterexample found
      if (holds) {
        summary << "schwarz violation found: min eigenvalue "
                << rep.schwarz_violation->min_eigenvalue << "\nwitness X:\n";
        const CMatrix& x = rep.schwarz_violation->witness;
        for (Index r = 0; r < x.rows(); ++r) {
          summary << "  ";
          for (Index c = 0; c < x.cols(); ++c)
            summary << "(" << x(r, c).real() << (x(r, c).imag() < 0 ? "" : "+")
                    << x(r, c).imag() << "i) ";
          summary << "\n";
        }
      } else {
        summary << "no schwarz violation in " << rep.trials
                << " trials (not a certification)\n";
      }
      nlohmann::json j;
      j["predicate"] = pred;
      j["violation_found"] = holds;
      j["trials"] = rep.trials;
      j["seed"] = rep.seed;
      if (rep.schwarz_violation)
        j["min_eigenvalue"] = rep.schwarz_violation->min_eigenvalue;
      witness_json = j.dump(2);
    } else {
      g_last_error = "unknown predicate '" + pred + "'";
      return QDFA_ERR_INVALID_INPUT;
    }
    *out = make_report(std::move(witness_json), summary.str());
    return holds ? QDFA_OK : QDFA_CHECK_FAILED;
  } catch (...) {
    return guard_failure(std::current_exception());
  }
}

qdfa_status qdfa_run_suite(const qdfa_options* opts, const int* dims, int n_dims,
                           int random_per_dim, qdfa_report** out) {
  if (!out) {
    g_last_error = "null argument";
    return QDFA_ERR_INVALID_INPUT;
  }
  *out = nullptr;
  try {
    SuiteOptions sopts;
    sopts.tol = tolerances_from(opts);
    if (opts) {
      sopts.seed = opts->seed;
      if (opts->trials > 0) sopts.trials = opts->trials;
    }
    if (dims && n_dims > 0) {
      sopts.dims.clear();
      for (int i = 0; i < n_dims; ++i) {
        if (dims[i] < 2 || dims[i] > 8) {
          g_last_error = "suite dims must lie in [2, 8]";
          return QDFA_ERR_INVALID_INPUT;
        }
        sopts.dims.push_back(dims[i]);
      }
    }
    if (random_per_dim > 0) sopts.random_per_dim = random_per_dim;
    const std::vector<Channel> corpus = build_corpus(sopts);
    const std::vector<InvariantResult> results = run_invariant_suite(corpus, sopts);
    bool all = true;
    std::ostringstream summary;
    for (const auto& r : results) {
      all = all && r.passed;
      summary << (r.passed ? "pass" : "FAIL") << "  " << r.name << "  worst residual "
              << r.worst_residual << " (bound " << r.bound << ")";
      if (!r.passed && !r.witness.empty()) summary << "  witness: " << r.witness;
      summary << "\n";
    }
    summary << (all ? "all invariants passed" : "INVARIANT FAILURES PRESENT") << " ("
            << corpus.size() << " channels)\n";
    *out = make_report(suite_report_json(results, sopts), summary.str());
    return all ? QDFA_OK : QDFA_CHECK_FAILED;
  } catch (...) {
    return guard_failure(std::current_exception());
  }
}

const char* qdfa_report_json(const qdfa_report* rep) { return rep ? rep->json.c_str() : ""; }

const char* qdfa_report_summary(const qdfa_report* rep) {
  return rep ? rep->summary.c_str() : "";
}

void qdfa_report_free(qdfa_report* rep) { delete rep; }

}  // extern "C"
