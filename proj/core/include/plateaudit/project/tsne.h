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

#ifndef PLATEAUDIT_PROJECT_TSNE_H_
#define PLATEAUDIT_PROJECT_TSNE_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "plateaudit/features/table.h"

namespace plateaudit::project {

struct TsneOptions {
  double perplexity = 30.0;
  int iterations = 1000;
  uint64_t seed = 0;
  double exaggeration = 12.0;
  int exaggeration_iterations = 250;
  double learning_rate = 200.0;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  // Table inputs only: rows beyond this are subsampled, and features are
  // z-scored then reduced to this many principal components.
  int max_rows = 5000;
  int pca_dims = 30;
};

// Joint affinities of exact t-SNE, stored as the strict upper triangle.
class TsneAffinities {
 public:
  TsneAffinities() = default;
  // Throws Error(kInput) for n < 3, Error(kConfig) unless
  // 0 < perplexity < (n - 1) / 3, Error(kDegenerateInput) when some point
  // has more than (n - 1) - 3 * perplexity exact duplicates.
  static TsneAffinities Compute(const Eigen::MatrixXd& x, double perplexity);

  int n() const { return n_; }
  // Symmetric; the full matrix sums to 1 and has a zero diagonal.
  double operator()(int i, int j) const;
  const std::vector<double>& packed() const { return packed_; }
  // Conditional entropies (bits) reached by the bandwidth search.
  const std::vector<double>& entropies() const { return entropies_; }
  // Points whose entropy missed log2(perplexity) by more than 1e-4.
  const std::vector<int>& uncalibrated() const { return uncalibrated_; }

 private:
  int n_ = 0;
  std::vector<double> packed_;
  std::vector<double> entropies_;
  std::vector<int> uncalibrated_;
};

inline std::size_t PackedIndex(int n, int i, int j) {
  // Requires i < j.
  return static_cast<std::size_t>(i) * (2 * static_cast<std::size_t>(n) - i - 1) / 2 +
         static_cast<std::size_t>(j - i - 1);
}

struct TsneRun {
  Eigen::MatrixXd coords;
  // KL(P || Q) at the initial layout, after the exaggeration phase and at the end,
  // all against the unexaggerated P.
  double kl_initial = 0.0;
  double kl_after_exaggeration = 0.0;
  double kl_final = 0.0;
  std::vector<int> uncalibrated;
};

TsneRun Tsne(const Eigen::MatrixXd& x, const TsneOptions& options);

// KL divergence of the t-SNE Student-t similarities of `y` from P.
double TsneKl(const TsneAffinities& p, const Eigen::MatrixXd& y);

struct Projection2D {
  std::vector<std::string> keys;
  std::vector<features::RowMeta> meta;
  Eigen::MatrixXd coords;
  std::string method = "tsne";
  double perplexity = 0.0;
  int iterations = 0;
  uint64_t seed = 0;
  double kl_initial = 0.0;
  double kl_after_exaggeration = 0.0;
  double kl_final = 0.0;
  int input_rows = 0;
  std::vector<std::string> warnings;
};

// z-score, PCA, then t-SNE over a feature table.
Projection2D ProjectTable(const features::FeatureTable& table, const TsneOptions& options);

// Mean fraction of each point's k nearest neighbours (Euclidean, ties by
// index) that share its label.
double NeighborPurity(const Eigen::MatrixXd& coords, const std::vector<std::string>& labels,
                      int k);

std::string CoordsToCsv(const Projection2D& projection);

// Categorical scatter plot. Throws Error(kInput) for more than 20 categories.
std::string ScatterSvg(const Projection2D& projection, const std::vector<std::string>& labels,
                       const std::string& title);
inline constexpr int kMaxScatterCategories = 20;
const std::vector<std::string>& CategoricalPalette();

}  // namespace plateaudit::project

#endif  // PLATEAUDIT_PROJECT_TSNE_H_
