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

#include "plateaudit/audit/report.h"

#include <string>

#include <nlohmann/json.hpp>

#include "plateaudit/core/error.h"
#include "plateaudit/core/io.h"

namespace plateaudit::audit {
namespace {

using nlohmann::json;

double Round(double v) { return std::stod(FormatSignificant(v, 10)); }

json RoundAll(const std::vector<double>& values) {
  json out = json::array();
  for (const double v : values) out.push_back(Round(v));
  return out;
}

json NuisanceJson(const NuisanceAuditResult& n) {
  json factors = json::array();
  for (const FactorResult& f : n.factors) {
    factors.push_back({{"factor", f.factor},
                       {"skipped", f.skipped},
                       {"note", f.note},
                       {"classes", f.classes},
                       {"train_rows", f.train_rows},
                       {"test_rows", f.test_rows},
                       {"accuracy", Round(f.accuracy)},
                       {"converged", f.converged},
                       {"baseline", RoundAll(f.baseline)},
                       {"baseline_mean", Round(f.baseline_mean)},
                       {"baseline_sd", Round(f.baseline_sd)},
                       {"chance", Round(f.chance)},
                       {"biased", f.biased}});
  }
  return {{"controls_only", n.controls_only}, {"rows", n.rows},
          {"repeats", n.repeats},             {"margin", Round(n.margin)},
          {"seed", n.seed},                   {"factors", factors}};
}

json DiseaseJson(const DiseaseAuditResult& d) {
  json folds = json::array();
  for (const FoldResult& f : d.folds) {
    folds.push_back({{"fold", f.fold_id},
                     {"annotations", f.annotations},
                     {"skipped", f.skipped},
                     {"error", f.error},
                     {"train_rows", f.train_rows},
                     {"test_rows", f.test_rows},
                     {"auc", Round(f.auc)}});
  }
  return {{"family", std::string(ToString(d.family))},
          {"scheme", d.scheme},
          {"folds", folds},
          {"evaluated_folds", d.evaluated},
          {"median_auc", Round(d.median_auc)},
          {"worst_fold", d.worst_fold},
          {"worst_auc", Round(d.worst_auc)},
          {"covariate_coincidence", d.covariate_coincidence}};
}

json PdpJson(const learn::PdpCurve& c) {
  return {{"feature", c.feature},
          {"feature_name", c.feature_name},
          {"positive_class", c.positive_class},
          {"grid", RoundAll(c.grid)},
          {"probability", RoundAll(c.probability)},
          {"constant_feature", c.constant_feature}};
}

std::string Fmt(const json& v, int digits = 3) {
  return v.is_number() ? FormatFixed(v.get<double>(), digits) : v.dump();
}

[[noreturn]] void SchemaError(const std::string& what) {
  throw Error(ErrorCode::kSchema, "report.json: " + what);
}

json ParseAndValidate(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("report.json: ") + e.what());
  }
  if (!doc.is_object()) SchemaError("top level must be an object");
  if (!doc.contains("schema_version")) SchemaError("missing schema_version");
  if (!doc["schema_version"].is_number_integer() ||
      doc["schema_version"].get<int>() != kReportSchemaVersion) {
    SchemaError("schema_version " + doc["schema_version"].dump() + " is not supported (expected " +
                std::to_string(kReportSchemaVersion) + ")");
  }
  const auto require = [&](const char* key, json::value_t type, bool nullable = false) {
    if (!doc.contains(key)) SchemaError(std::string("missing '") + key + "'");
    const json& v = doc[key];
    if (nullable && v.is_null()) return;
    if (v.type() != type) SchemaError(std::string("'") + key + "' has the wrong type");
  };
  require("config_digest", json::value_t::string);
  require("seeds", json::value_t::object);
  require("inputs", json::value_t::object);
  require("nuisance", json::value_t::object, true);
  require("disease", json::value_t::array);
  require("density_check", json::value_t::object, true);
  require("pdp", json::value_t::array);
  require("artifacts", json::value_t::array);
  require("bias_detected", json::value_t::boolean);
  require("narrative", json::value_t::array);
  try {
    if (!doc["nuisance"].is_null()) {
      for (const json& f : doc["nuisance"].at("factors")) {
        (void)f.at("factor").get<std::string>();
        (void)f.at("biased").get<bool>();
        (void)f.at("accuracy").get<double>();
      }
    }
    for (const json& d : doc["disease"]) {
      (void)d.at("family").get<std::string>();
      for (const json& f : d.at("folds")) (void)f.at("auc").get<double>();
    }
    for (const json& a : doc["artifacts"]) (void)a.get<std::string>();
    for (const json& s : doc["narrative"]) (void)s.get<std::string>();
  } catch (const json::exception& e) {
    SchemaError(std::string("malformed section: ") + e.what());
  }
  return doc;
}

void FoldTable(const json& d, std::string& md) {
  md += "| fold | test units | same source | train rows | test rows | AUC |\n";
  md += "|---:|---|:---:|---:|---:|---:|\n";
  for (const json& f : d["folds"]) {
    const json& a = f["annotations"];
    std::string units;
    if (a.contains("healthy")) {
      units = a["healthy"].get<std::string>() + " / " + a["disease"].get<std::string>();
    } else if (a.contains("batch")) {
      units = "batch " + a["batch"].get<std::string>();
    }
    const std::string same = a.contains("same_source") ? a["same_source"].get<std::string>() : "";
    md += "| " + f["fold"].dump() + " | " + units + " | " + same + " | " +
          f["train_rows"].dump() + " | " + f["test_rows"].dump() + " | " +
          (f["skipped"].get<bool>() ? "skipped: " + f["error"].get<std::string>()
                                    : Fmt(f["auc"])) +
          " |\n";
  }
}

}  // namespace

bool AuditReport::BiasDetected() const {
  if (nuisance && nuisance->AnyBiased()) return true;
  for (const auto& d : disease) {
    if (d.covariate_coincidence) return true;
  }
  return density && (density->confound || density->full.covariate_coincidence);
}

std::vector<std::string> AuditReport::Narrative() const {
  std::vector<std::string> out;
  if (nuisance) {
    for (const FactorResult& f : nuisance->factors) {
      if (f.skipped) {
        out.push_back("Factor " + f.factor + " was skipped: " + f.note + ".");
      } else if (f.biased) {
        out.push_back("Nuisance factor " + f.factor + " is predictable from the features (accuracy " +
                      FormatFixed(f.accuracy, 3) + " vs permuted baseline " +
                      FormatFixed(f.baseline_mean, 3) + " +/- " + FormatFixed(f.baseline_sd, 3) +
                      ", chance " + FormatFixed(f.chance, 3) + ").");
      }
    }
    if (!nuisance->AnyBiased()) {
      out.push_back("No nuisance factor is predictable beyond the permuted baseline.");
    }
  }
  const auto describe = [&](const DiseaseAuditResult& d) {
    if (d.evaluated == 0) {
      out.push_back("Disease audit (" + std::string(ToString(d.family)) +
                    ") evaluated no folds.");
      return;
    }
    out.push_back("Disease audit (" + std::string(ToString(d.family)) + "): median AUC " +
                  FormatFixed(d.median_auc, 3) + " over " + std::to_string(d.evaluated) +
                  " folds; worst fold " + std::to_string(d.worst_fold) + " at " +
                  FormatFixed(d.worst_auc, 3) + ".");
    if (d.covariate_coincidence) {
      out.push_back("The worst fold tests a pair from the same lab source and scores below "
                    "chance: the model may be keying on lab source rather than disease.");
    }
  };
  for (const auto& d : disease) describe(d);
  if (density) {
    describe(density->full);
    describe(density->density_only);
    out.push_back(density->confound
                      ? "Cell density alone predicts the condition about as well as the full "
                        "feature set: density is a likely confounder."
                      : "Cell density alone does not explain the full model's performance.");
  }
  return out;
}

std::string ReportToJson(const AuditReport& report) {
  json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["tool"] = "plateaudit";
  doc["config_digest"] = report.config_digest;
  doc["seeds"] = report.seeds;
  doc["inputs"] = report.inputs;
  doc["nuisance"] = report.nuisance ? NuisanceJson(*report.nuisance) : json(nullptr);
  doc["disease"] = json::array();
  for (const auto& d : report.disease) doc["disease"].push_back(DiseaseJson(d));
  if (report.density) {
    json delta = json::object();
    for (const auto& [fold, v] : report.density->auc_delta) delta[std::to_string(fold)] = Round(v);
    doc["density_check"] = {{"full", DiseaseJson(report.density->full)},
                            {"density_only", DiseaseJson(report.density->density_only)},
                            {"auc_delta", delta},
                            {"confound", report.density->confound},
                            {"gap", kDensityGap},
                            {"full_gate", kDensityFullGate},
                            {"density_pdp", PdpJson(report.density->density_pdp)}};
  } else {
    doc["density_check"] = nullptr;
  }
  doc["pdp"] = json::array();
  for (const auto& c : report.pdp) doc["pdp"].push_back(PdpJson(c));
  doc["artifacts"] = report.artifacts;
  doc["bias_detected"] = report.BiasDetected();
  doc["narrative"] = report.Narrative();
  return doc.dump(2) + "\n";
}

void ValidateReportJson(std::string_view text) { (void)ParseAndValidate(text); }

std::string ReportMarkdownFromJson(std::string_view text) {
  const json doc = ParseAndValidate(text);
  std::string md = "# Plate audit report\n\n";
  md += "- schema version: " + doc["schema_version"].dump() + "\n";
  md += "- config digest: `" + doc["config_digest"].get<std::string>() + "`\n";
  for (const auto& [name, seed] : doc["seeds"].items()) {
    md += "- seed `" + name + "`: " + seed.dump() + "\n";
  }
  for (const auto& [name, value] : doc["inputs"].items()) {
    md += "- input `" + name + "`: " + value.get<std::string>() + "\n";
  }
  md += "\n## Verdict: ";
  md += doc["bias_detected"].get<bool>() ? "bias detected\n\n" : "no bias detected\n\n";
  for (const json& s : doc["narrative"]) md += "- " + s.get<std::string>() + "\n";

  if (!doc["nuisance"].is_null()) {
    const json& n = doc["nuisance"];
    md += "\n## Nuisance audit\n\n";
    md += std::string("Rows audited: ") + n["rows"].dump() +
          (n["controls_only"].get<bool>() ? " (control wells only)" : "") + "; " +
          n["repeats"].dump() + " permuted repeats; margin " + Fmt(n["margin"], 2) + ".\n\n";
    md += "| factor | classes | accuracy | baseline mean | baseline sd | chance | verdict |\n";
    md += "|---|---:|---:|---:|---:|---:|---|\n";
    for (const json& f : n["factors"]) {
      const std::string verdict = f["skipped"].get<bool>() ? "skipped"
                                  : f["biased"].get<bool>() ? "**biased**"
                                                            : "unbiased";
      md += "| " + f["factor"].get<std::string>() + " | " + std::to_string(f["classes"].size()) +
            " | " + Fmt(f["accuracy"]) + " | " + Fmt(f["baseline_mean"]) + " | " +
            Fmt(f["baseline_sd"]) + " | " + Fmt(f["chance"]) + " | " + verdict + " |\n";
    }
  }
  for (const json& d : doc["disease"]) {
    md += "\n## Disease audit: " + d["family"].get<std::string>() + " (" +
          d["scheme"].get<std::string>() + ")\n\n";
    md += "Median AUC " + Fmt(d["median_auc"]) + "; worst fold " + d["worst_fold"].dump() +
          " (AUC " + Fmt(d["worst_auc"]) + "); covariate coincidence: " +
          (d["covariate_coincidence"].get<bool>() ? "**yes**" : "no") + ".\n\n";
    FoldTable(d, md);
  }
  if (!doc["density_check"].is_null()) {
    const json& c = doc["density_check"];
    md += "\n## Density confound check\n\n";
    md += "Median AUC full " + Fmt(c["full"]["median_auc"]) + ", density only " +
          Fmt(c["density_only"]["median_auc"]) + "; confound: " +
          (c["confound"].get<bool>() ? "**yes**" : "no") + ".\n\n";
    md += "| fold | full AUC | density-only AUC | delta |\n|---:|---:|---:|---:|\n";
    const json& full = c["full"]["folds"];
    const json& dens = c["density_only"]["folds"];
    for (std::size_t i = 0; i < full.size() && i < dens.size(); ++i) {
      const std::string fold = full[i]["fold"].dump();
      const std::string delta =
          c["auc_delta"].contains(fold) ? Fmt(c["auc_delta"][fold]) : "n/a";
      md += "| " + fold + " | " + Fmt(full[i]["auc"]) + " | " + Fmt(dens[i]["auc"]) + " | " +
            delta + " |\n";
    }
  }
  std::vector<json> curves(doc["pdp"].begin(), doc["pdp"].end());
  if (!doc["density_check"].is_null()) curves.push_back(doc["density_check"]["density_pdp"]);
  if (!curves.empty()) {
    md += "\n## Partial dependence\n";
    for (const json& c : curves) {
      if (c["grid"].empty()) continue;
      md += "\nFeature " + c["feature_name"].get<std::string>() + ":\n\n| value | P |\n|---:|---:|\n";
      for (std::size_t i = 0; i < c["grid"].size(); ++i) {
        md += "| " + Fmt(c["grid"][i], 4) + " | " + Fmt(c["probability"][i], 4) + " |\n";
      }
    }
  }
  if (!doc["artifacts"].empty()) {
    md += "\n## Figures\n\n";
    for (const json& a : doc["artifacts"]) {
      const std::string path = a.get<std::string>();
      md += "- [" + path + "](" + path + ")\n";
    }
  }
  return md;
}

std::string ReportToMarkdown(const AuditReport& report) {
  return ReportMarkdownFromJson(ReportToJson(report));
}

}  // namespace plateaudit::audit
