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

#ifndef QDFA_REPORT_HPP
#define QDFA_REPORT_HPP

#include <string>

#include "qdfa/algebra.hpp"
#include "qdfa/positivity.hpp"

namespace qdfa {

inline constexpr const char* kToolVersion = "0.1.0";

/// Machine-readable analysis document. See docs/report_schema.md for the
/// field-by-field description. Serialization is deterministic apart from
/// the generated_at timestamp.
struct ReportDocument {
  std::string tool_version = kToolVersion;
  std::string channel_label;
  Tolerances tolerances;
  SpectralDecomposition spectral;  // spectrum + peripheral data summarized
  AnalysisReport analysis;
  PositivityReport positivity;
  bool emit_bases = false;
  // Bases dumped when emit_bases is set.
  const AnalysisData* data = nullptr;  // non-owning, for basis dumps
};

std::string report_to_json_text(const ReportDocument& doc);

/// Short human summary for stdout (the JSON goes to --report only).
std::string report_summary_text(const ReportDocument& doc);

}  // namespace qdfa

#endif  // QDFA_REPORT_HPP
