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

#include "cli.h"

#include <algorithm>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plateaudit/audit/disease.h"
#include "plateaudit/audit/nuisance.h"
#include "plateaudit/audit/report.h"
#include "plateaudit/core/error.h"
#include "plateaudit/core/io.h"
#include "plateaudit/core/manifest.h"
#include "plateaudit/core/parallel.h"
#include "plateaudit/core/rng.h"
#include "plateaudit/features/table.h"
#include "plateaudit/imaging/focus.h"
#include "plateaudit/imaging/heatmap.h"
#include "plateaudit/imaging/patches.h"
#include "plateaudit/imaging/segment.h"
#include "plateaudit/learn/folds.h"
#include "plateaudit/learn/pdp.h"
#include "plateaudit/project/tsne.h"
#include "plateaudit/simulate/simulator.h"

namespace plateaudit::cli {
namespace {

namespace fs = std::filesystem;

struct GlobalFlags {
  int threads = 1;
  bool emit_config = false;
};

struct SimulateFlags {
  std::string config;
  std::string out;
  std::optional<uint64_t> seed;
};

struct FeaturizeFlags {
  std::string manifest;
  std::string out;
  std::string unit = "site";
  int nucleus_channel = 0;
  int min_area = 5;
  int patch_size = imaging::kDefaultPatchSize;
  std::string detections;
};

struct FocusFlags {
  std::string manifest;
  std::string model;
  std::string train_from;
  std::string save_model;
  std::string out;
  std::string scores;
  std::vector<double> blur_levels = {0.0, 1.0, 2.0, 3.0, 4.0};
  int max_patches = 400;
  int patch_size = imaging::kDefaultPatchSize;
  uint64_t seed = 0;
};

struct ProjectFlags {
  std::string features;
  std::string method = "tsne";
  double perplexity = 30.0;
  int iterations = 1000;
  uint64_t seed = 0;
  std::string color_by = "batch";
  std::string out;
  std::string svg;
  int pca_dims = 30;
  int max_rows = 5000;
  int purity_k = 15;
};

struct AuditFlags {
  std::string kind;
  std::string features;
  std::string embeddings;
  std::string manifest;
  std::string folds = "pair";
  std::string pairs;
  std::string family;
  std::string out;
  std::vector<std::string> factors = {"batch", "plate", "row", "column"};
  int repeats = 10;
  double lambda = 1e-2;
  double margin = 0.05;
  uint64_t seed = 0;
  std::string pdp_feature;
  std::string pdp_out;
  std::vector<std::string> artifacts;
};

struct ReportFlags {
  std::string in;
  std::string out;
};

std::string Fixed(double v, int digits = 4) { return FormatFixed(v, digits); }

fs::path ManifestDir(const std::string& manifest) {
  const fs::path p(manifest);
  return p.has_parent_path() ? p.parent_path() : fs::path(".");
}

int RunSimulate(const SimulateFlags& f, const GlobalFlags& g, std::ostream& out) {
  simulate::SimConfig config = f.config.empty()
                                   ? simulate::DefaultSimConfig()
                                   : simulate::SimConfigFromJson(ReadFile(f.config));
  if (f.seed) config.root_seed = *f.seed;
  config.Validate();
  if (g.emit_config) out << simulate::SimConfigToJson(config);
  const simulate::ExperimentPlan plan = simulate::GenerateExperiment(config, f.out, g.threads);
  out << "simulated " << plan.manifest.sites.size() << " sites on "
      << config.batches * config.plates_per_batch << " plates into " << f.out << "\n";
  out << "config digest " << plan.manifest.config_digest << "\n";
  return kExitClean;
}

int RunFeaturize(const FeaturizeFlags& f, const GlobalFlags& g, std::ostream& out) {
  const ExperimentManifest manifest = LoadManifest(f.manifest);
  features::FeaturizeOptions options;
  options.unit = features::ParseFeatureUnit(f.unit);
  options.segmentation.channel = f.nucleus_channel;
  options.segmentation.min_area = f.min_area;
  options.patch_size = f.patch_size;
  options.threads = g.threads;
  const features::SiteLoader loader =
      features::FileSiteLoader(manifest, ManifestDir(f.manifest));
  const features::FeatureTable table = features::Featurize(manifest, loader, options);
  features::SaveFeatureTable(f.out, table);
  if (!f.detections.empty()) {
    std::vector<std::string> rows(manifest.sites.size());
    ParallelFor(manifest.sites.size(), g.threads, [&](std::size_t i) {
      const auto seg = imaging::SegmentNuclei(loader(i), options.segmentation);
      rows[i] = imaging::DetectionsToCsvRows(manifest.sites[i].key.ToString(), seg.detections);
    });
    std::string csv = imaging::kDetectionsCsvHeader;
    for (const auto& r : rows) csv += r;
    WriteFile(f.detections, csv);
  }
  out << "featurized " << table.size() << " " << f.unit << " rows x " << table.width()
      << " features into " << f.out << "\n";
  return kExitClean;
}

std::vector<SiteImage> CollectFocusPatches(const std::string& manifest_path,
                                           const FocusFlags& f) {
  const ExperimentManifest manifest = LoadManifest(manifest_path);
  const features::SiteLoader loader =
      features::FileSiteLoader(manifest, ManifestDir(manifest_path));
  std::vector<std::size_t> order(manifest.sites.size());
  std::iota(order.begin(), order.end(), 0);
  RngStream rng = RngStream::Derive(f.seed, {"focus", "sites"});
  rng.Shuffle(order);
  std::vector<SiteImage> patches;
  for (const std::size_t i : order) {
    if (static_cast<int>(patches.size()) >= f.max_patches) break;
    const SiteImage image = loader(i);
    const auto seg = imaging::SegmentNuclei(image);
    for (auto& p : imaging::CropPatches(image, manifest.sites[i].key, seg.detections,
                                        f.patch_size)) {
      if (static_cast<int>(patches.size()) >= f.max_patches) break;
      patches.push_back(std::move(p.data));
    }
  }
  return patches;
}

int RunFocusMap(const FocusFlags& f, const GlobalFlags& g, std::ostream& out,
                std::ostream& err) {
  if (f.model.empty() == f.train_from.empty()) {
    err << "error: focus-map needs exactly one of --model or --train-from\n";
    return kExitUsage;
  }
  imaging::FocusModel model;
  if (!f.model.empty()) {
    model = imaging::FocusModelFromJson(ReadFile(f.model));
  } else {
    const std::vector<SiteImage> patches = CollectFocusPatches(f.train_from, f);
    RngStream rng = RngStream::Derive(f.seed, {"focus", "train"});
    imaging::FocusTrainingOptions options;
    options.max_patches = f.max_patches;
    model = imaging::TrainFocusModel(patches, f.blur_levels, rng, options);
    out << "trained focus model on " << std::min<std::size_t>(patches.size(), f.max_patches)
        << " patches x " << f.blur_levels.size() << " blur levels\n";
    if (!f.save_model.empty()) WriteFile(f.save_model, imaging::FocusModelToJson(model));
  }

  const ExperimentManifest manifest = LoadManifest(f.manifest);
  const features::SiteLoader loader = features::FileSiteLoader(manifest, ManifestDir(f.manifest));
  std::vector<imaging::FocusScore> scores(manifest.sites.size());
  ParallelFor(manifest.sites.size(), g.threads,
              [&](std::size_t i) { scores[i] = imaging::ScoreFocus(model, loader(i)); });

  std::map<std::pair<std::string, std::string>, imaging::SiteValueMap> plates;
  imaging::SiteValueMap pooled_sum;
  std::map<std::pair<WellAddress, int>, int> pooled_count;
  int sites_per_well = 1;
  std::string csv = "key,score,degenerate\n";
  for (std::size_t i = 0; i < manifest.sites.size(); ++i) {
    const SiteKey& key = manifest.sites[i].key;
    sites_per_well = std::max(sites_per_well, key.site_index + 1);
    plates[{key.batch, key.plate}][{key.well, key.site_index}] = scores[i].score;
    pooled_sum[{key.well, key.site_index}] += scores[i].score;
    ++pooled_count[{key.well, key.site_index}];
    csv += key.ToString() + "," + FormatSignificant(scores[i].score, 9) + "," +
           (scores[i].degenerate ? "true" : "false") + "\n";
  }
  if (!f.scores.empty()) WriteFile(f.scores, csv);

  const fs::path out_path(f.out);
  for (const auto& [plate, values] : plates) {
    fs::path svg_path = out_path;
    if (plates.size() > 1) {
      svg_path = out_path.parent_path() / (out_path.stem().string() + "_" + plate.first + "_" +
                                           plate.second + out_path.extension().string());
    }
    WriteFile(svg_path, imaging::PlateHeatmapSvg(values, sites_per_well,
                                                 "focus score " + plate.first + "/" + plate.second));
    const auto summary = imaging::SummarizeFocusGradient(values);
    out << "plate " << plate.first << "/" << plate.second
        << ": center_minus_corner=" << Fixed(summary.center_minus_corner)
        << " spearman=" << Fixed(summary.spearman) << " svg=" << svg_path.string() << "\n";
  }
  for (auto& [site, v] : pooled_sum) v /= pooled_count[site];
  const auto summary = imaging::SummarizeFocusGradient(pooled_sum);
  double lo = 1.0, hi = 0.0;
  for (const auto& s : scores) {
    lo = std::min(lo, s.score);
    hi = std::max(hi, s.score);
  }
  out << "all plates: center_minus_corner=" << Fixed(summary.center_minus_corner)
      << " spearman=" << Fixed(summary.spearman) << " range=" << Fixed(hi - lo) << "\n";
  return kExitClean;
}

int RunProject(const ProjectFlags& f, const GlobalFlags&, std::ostream& out, std::ostream& err) {
  const features::FeatureTable table = features::LoadFeatureTable(f.features);
  if (!table.rows.empty()) (void)features::MetaValue(table.rows.front().meta, f.color_by);
  project::TsneOptions options;
  options.perplexity = f.perplexity;
  options.iterations = f.iterations;
  options.seed = f.seed;
  options.pca_dims = f.pca_dims;
  options.max_rows = f.max_rows;
  const project::Projection2D projection = project::ProjectTable(table, options);
  for (const auto& w : projection.warnings) err << "warning: " << w << "\n";
  WriteFile(f.out, project::CoordsToCsv(projection));

  const auto labels_for = [&](const std::string& column) {
    std::vector<std::string> labels;
    for (const auto& m : projection.meta) labels.push_back(features::MetaValue(m, column));
    return labels;
  };
  const fs::path svg = f.svg.empty() ? fs::path(f.out).replace_extension(".svg") : fs::path(f.svg);
  WriteFile(svg, project::ScatterSvg(projection, labels_for(f.color_by),
                                     "t-SNE colored by " + f.color_by));
  out << "kl_initial=" << Fixed(projection.kl_initial)
      << " kl_after_exaggeration=" << Fixed(projection.kl_after_exaggeration)
      << " final_kl=" << Fixed(projection.kl_final) << "\n";
  for (const char* column :
       {"batch", "plate", "row", "column", "cell_line", "condition", "lab_source"}) {
    out << "purity[" << column << "]="
        << Fixed(project::NeighborPurity(projection.coords, labels_for(column), f.purity_k))
        << " (k=" << f.purity_k << ")\n";
  }
  out << "coords=" << f.out << " svg=" << svg.string() << "\n";
  return kExitClean;
}

int RunAudit(const AuditFlags& f, const GlobalFlags& g, std::ostream& out, std::ostream& err) {
  if (f.features.empty() == f.embeddings.empty()) {
    err << "error: audit needs exactly one of --features or --embeddings\n";
    return kExitUsage;
  }
  std::optional<ExperimentManifest> manifest;
  if (!f.manifest.empty()) manifest = LoadManifest(f.manifest);
  features::FeatureTable table;
  audit::ModelFamily family = audit::ModelFamily::kFull;
  audit::AuditReport report;
  if (!f.embeddings.empty()) {
    if (!manifest) {
      err << "error: --embeddings needs --manifest to join metadata\n";
      return kExitUsage;
    }
    table = features::ImportExternalEmbeddings(ReadFile(f.embeddings), *manifest);
    family = audit::ModelFamily::kExternal;
    report.inputs["embeddings"] = fs::path(f.embeddings).filename().string();
  } else {
    table = features::LoadFeatureTable(f.features);
    report.inputs["features"] = fs::path(f.features).filename().string();
  }
  if (!f.family.empty()) family = audit::ParseModelFamily(f.family);
  if (manifest) report.config_digest = manifest->config_digest;
  report.seeds["audit"] = f.seed;
  report.inputs["audit"] = f.kind;
  report.artifacts = f.artifacts;

  const auto make_folds = [&]() {
    const std::vector<learn::FoldUnit> units = audit::FoldUnitsFromTable(table);
    report.inputs["folds"] = f.folds;
    if (f.folds == "batch") return learn::MakeFoldsLeaveBatchOut(units);
    if (f.pairs.empty()) throw Error(ErrorCode::kInput, "--folds pair needs --pairs pairs.json");
    report.inputs["pairs"] = fs::path(f.pairs).filename().string();
    const std::vector<learn::LinePair> pairs = learn::ParsePairsJson(ReadFile(f.pairs));
    const std::vector<CellLine> lines = audit::LinesFromTable(table);
    return learn::MakeFoldsLeavePairOut(lines, pairs, units);
  };

  audit::DiseaseOptions disease_options;
  disease_options.lambda = f.lambda;
  disease_options.threads = g.threads;
  if (f.kind == "nuisance") {
    audit::NuisanceOptions options;
    options.factors = f.factors;
    options.repeats = f.repeats;
    options.lambda = f.lambda;
    options.seed = f.seed;
    options.margin = f.margin;
    options.threads = g.threads;
    report.nuisance = audit::NuisanceAudit(table, options);
    for (const auto& fr : report.nuisance->factors) {
      out << "factor " << fr.factor << ": "
          << (fr.skipped ? "skipped (" + fr.note + ")"
                         : "accuracy=" + Fixed(fr.accuracy) + " baseline=" +
                               Fixed(fr.baseline_mean) + "+/-" + Fixed(fr.baseline_sd) +
                               " chance=" + Fixed(fr.chance) +
                               (fr.biased ? " BIASED" : " unbiased"))
          << "\n";
    }
  } else if (f.kind == "disease") {
    report.disease.push_back(audit::DiseaseAudit(table, make_folds(), family, disease_options));
    const auto& d = report.disease.back();
    for (const auto& fold : d.folds) {
      out << "fold " << fold.fold_id << ": "
          << (fold.skipped ? "skipped (" + fold.error + ")" : "auc=" + Fixed(fold.auc)) << "\n";
    }
    out << "median_auc=" << Fixed(d.median_auc) << " worst_fold=" << d.worst_fold
        << " covariate_coincidence=" << (d.covariate_coincidence ? "true" : "false") << "\n";
  } else {
    report.density = audit::DensityConfoundCheck(table, make_folds(), disease_options);
    out << "median_auc full=" << Fixed(report.density->full.median_auc)
        << " density_only=" << Fixed(report.density->density_only.median_auc)
        << " confound=" << (report.density->confound ? "true" : "false") << "\n";
    if (!f.pdp_out.empty()) WriteFile(f.pdp_out, learn::PdpToCsv(report.density->density_pdp));
  }
  if (!f.pdp_feature.empty()) {
    const features::FeatureTable rows =
        table.Filter([](const features::FeatureRow& r) { return !r.meta.is_control; });
    std::vector<int> y;
    for (const auto& r : rows.rows) y.push_back(r.meta.condition == "disease" ? 1 : 0);
    learn::LogisticOptions fit;
    fit.lambda = f.lambda;
    const Eigen::MatrixXd x = rows.Matrix();
    const auto model = learn::TrainLogistic(x, y, {"healthy", "disease"}, fit, rows.feature_names);
    report.pdp.push_back(
        learn::PartialDependence(model, x, rows.FeatureIndex(f.pdp_feature), 20, 1));
    if (!f.pdp_out.empty() && f.kind != "density") {
      WriteFile(f.pdp_out, learn::PdpToCsv(report.pdp.back()));
    }
  }
  WriteFile(f.out, audit::ReportToJson(report));
  const bool bias = report.BiasDetected();
  out << (bias ? "verdict: bias detected" : "verdict: no bias detected") << " (report " << f.out
      << ")\n";
  return bias ? kExitBias : kExitClean;
}

int RunReport(const ReportFlags& f, std::ostream& out) {
  WriteFile(f.out, audit::ReportMarkdownFromJson(ReadFile(f.in)));
  out << "wrote " << f.out << "\n";
  return kExitClean;
}

}  // namespace

int Run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"plateaudit: simulate plate-based microscopy experiments and audit them for "
               "nuisance signal"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  GlobalFlags global;
  app.add_option("--threads", global.threads, "Worker threads; outputs do not depend on it")
      ->check(CLI::Range(1, 1024));
  app.add_flag("--emit-config", global.emit_config,
               "Print the effective settings before running");
  app.set_version_flag("--version", "plateaudit 0.1.0");

  SimulateFlags sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Generate a synthetic experiment");
  simulate->fallthrough();
  simulate->add_option("--config", sim.config, "Simulation config JSON (defaults if omitted)")
      ->check(CLI::ExistingFile);
  simulate->add_option("--out", sim.out, "Output directory")->required();
  simulate->add_option("--seed", sim.seed, "Overrides the config root_seed");

  FeaturizeFlags feat;
  CLI::App* featurize = app.add_subcommand("featurize", "Segment and extract 63 features");
  featurize->fallthrough();
  featurize->add_option("--manifest", feat.manifest, "manifest.jsonl")
      ->required()->check(CLI::ExistingFile);
  featurize->add_option("--out", feat.out, "features.csv")->required();
  featurize->add_option("--unit", feat.unit, "Row unit")->check(CLI::IsMember({"site", "patch"}));
  featurize->add_option("--nucleus-channel", feat.nucleus_channel, "Nuclear stain channel");
  featurize->add_option("--min-area", feat.min_area, "Smallest nucleus kept, in pixels");
  featurize->add_option("--patch-size", feat.patch_size, "Patch side for --unit patch");
  featurize->add_option("--detections", feat.detections, "Optional detections CSV output");

  FocusFlags focus;
  CLI::App* focus_map = app.add_subcommand("focus-map", "Score focus and draw plate heatmaps");
  focus_map->fallthrough();
  focus_map->add_option("--manifest", focus.manifest, "Sites to score")
      ->required()->check(CLI::ExistingFile);
  focus_map->add_option("--model", focus.model, "Trained focus model JSON")
      ->check(CLI::ExistingFile);
  focus_map->add_option("--train-from", focus.train_from, "Manifest of in-focus training sites")
      ->check(CLI::ExistingFile);
  focus_map->add_option("--save-model", focus.save_model, "Write the trained model here");
  focus_map->add_option("--out", focus.out, "Heatmap SVG; one file per plate")->required();
  focus_map->add_option("--scores", focus.scores, "Optional per-site score CSV");
  focus_map->add_option("--blur-levels", focus.blur_levels, "Training blur sigmas")
      ->delimiter(',');
  focus_map->add_option("--max-patches", focus.max_patches, "Training patch cap");
  focus_map->add_option("--patch-size", focus.patch_size, "Training patch side");
  focus_map->add_option("--seed", focus.seed, "Training seed");

  ProjectFlags proj;
  CLI::App* project = app.add_subcommand("project", "t-SNE projection of a feature table");
  project->fallthrough();
  project->add_option("--features", proj.features, "features.csv")
      ->required()->check(CLI::ExistingFile);
  project->add_option("--method", proj.method, "Projection method")
      ->check(CLI::IsMember({"tsne"}));
  project->add_option("--perplexity", proj.perplexity, "t-SNE perplexity");
  project->add_option("--iterations", proj.iterations, "t-SNE iterations");
  project->add_option("--seed", proj.seed, "Layout seed");
  project->add_option("--color-by", proj.color_by, "Metadata column for the scatter plot");
  project->add_option("--out", proj.out, "coords.csv")->required();
  project->add_option("--svg", proj.svg, "Scatter SVG (default: --out with .svg)");
  project->add_option("--pca-dims", proj.pca_dims, "Principal components kept before t-SNE");
  project->add_option("--max-rows", proj.max_rows, "Rows beyond this are subsampled");
  project->add_option("--purity-k", proj.purity_k, "Neighbours for the purity metric");

  AuditFlags aud;
  CLI::App* audit = app.add_subcommand("audit", "Nuisance, disease or density audit");
  audit->fallthrough();
  audit->add_option("kind", aud.kind, "nuisance | disease | density")
      ->required()->check(CLI::IsMember({"nuisance", "disease", "density"}));
  audit->add_option("--features", aud.features, "features.csv")->check(CLI::ExistingFile);
  audit->add_option("--embeddings", aud.embeddings, "External embedding CSV (key,...)")
      ->check(CLI::ExistingFile);
  audit->add_option("--manifest", aud.manifest, "Manifest for metadata and config digest")
      ->check(CLI::ExistingFile);
  audit->add_option("--folds", aud.folds, "Fold scheme")->check(CLI::IsMember({"pair", "batch"}));
  audit->add_option("--pairs", aud.pairs, "pairs.json for --folds pair")
      ->check(CLI::ExistingFile);
  audit->add_option("--family", aud.family, "full | density_only | external")
      ->check(CLI::IsMember({"full", "density_only", "external"}));
  audit->add_option("--out", aud.out, "report.json")->required();
  audit->add_option("--factors", aud.factors, "Nuisance factors")->delimiter(',');
  audit->add_option("--repeats", aud.repeats, "Permuted-baseline repeats");
  audit->add_option("--lambda", aud.lambda, "L2 penalty");
  audit->add_option("--margin", aud.margin, "Required accuracy above chance");
  audit->add_option("--seed", aud.seed, "Split and permutation seed");
  audit->add_option("--pdp-feature", aud.pdp_feature, "Add a PDP of this feature");
  audit->add_option("--pdp-out", aud.pdp_out, "PDP CSV output");
  audit->add_option("--artifact", aud.artifacts, "Figure path to link from the report");

  ReportFlags rep;
  CLI::App* report = app.add_subcommand("report", "Render report.json as Markdown");
  report->fallthrough();
  report->add_option("--in", rep.in, "report.json")->required()->check(CLI::ExistingFile);
  report->add_option("--out", rep.out, "report.md")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitClean : kExitUsage;
  }

  try {
    CLI::App* chosen = app.get_subcommands().front();
    if (global.emit_config && chosen != simulate) out << chosen->config_to_str(true, false);
    if (chosen == simulate) return RunSimulate(sim, global, out);
    if (chosen == featurize) return RunFeaturize(feat, global, out);
    if (chosen == focus_map) return RunFocusMap(focus, global, out, err);
    if (chosen == project) return RunProject(proj, global, out, err);
    if (chosen == audit) return RunAudit(aud, global, out, err);
    return RunReport(rep, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}

}  // namespace plateaudit::cli
