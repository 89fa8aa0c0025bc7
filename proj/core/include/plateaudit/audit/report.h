/*
 * Copyright 2026 The plateaudit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PLATEAUDIT_AUDIT_REPORT_H_
#define PLATEAUDIT_AUDIT_REPORT_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plateaudit/audit/disease.h"
#include "plateaudit/audit/nuisance.h"
#include "plateaudit/learn/pdp.h"

namespace plateaudit::audit {

inline constexpr int kReportSchemaVersion = 1;

struct AuditReport {
  std::string config_digest;
  std::map<std::string, uint64_t> seeds;
  // Free-form provenance (input file names, flags).
  std::map<std::string, std::string> inputs;
  std::optional<NuisanceAuditResult> nuisance;
  std::vector<DiseaseAuditResult> disease;
  std::optional<DensityCheckResult> density;
  std::vector<learn::PdpCurve> pdp;
  // Paths of generated figures, relative to the report.
  std::vector<std::string> artifacts;

  bool BiasDetected() const;
  std::vector<std::string> Narrative() const;
};

// Deterministic JSON: sorted keys, floats rounded to 10 significant digits.
std::string ReportToJson(const AuditReport& report);

// Parses and checks the report schema. Throws Error(kSchema) on a missing or
// mismatched schema_version or a malformed section and Error(kParse) on bad
// JSON.
void ValidateReportJson(std::string_view json);

// Markdown rendering of a report.json document; validates first.
std::string ReportMarkdownFromJson(std::string_view json);
std::string ReportToMarkdown(const AuditReport& report);

}  // namespace plateaudit::audit

#endif  // PLATEAUDIT_AUDIT_REPORT_H_
