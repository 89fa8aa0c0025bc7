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

#include "plateaudit/project/tsne.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "plateaudit/core/error.h"
#include "plateaudit/core/io.h"
#include "plateaudit/core/rng.h"
#include "plateaudit/project/pca.h"

namespace plateaudit::project {
namespace {

constexpr double kEntropyTolerance = 1e-4;
constexpr int kBandwidthSteps = 50;
constexpr double kMinGain = 0.01;
constexpr double kTinyProbability = 1e-300;

// Row i of squared distances to every other point.
void SquaredDistances(const Eigen::MatrixXd& x, int i, std::vector<double>& out) {
  const int n = static_cast<int>(x.rows());
  out.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    if (j != i) out[j] = (x.row(i) - x.row(j)).squaredNorm();
  }
}

// Conditional distribution p_{.|i} at precision beta; returns entropy in bits.
double Conditional(const std::vector<double>& dist, int i, double beta,
                   std::vector<double>& p) {
  const int n = static_cast<int>(dist.size());
  double d_min = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    if (j != i) d_min = std::min(d_min, dist[j]);
  }
  p.assign(n, 0.0);
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    p[j] = std::exp(-beta * (dist[j] - d_min));
    sum += p[j];
  }
  double entropy = 0.0;
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    p[j] /= sum;
    if (p[j] > kTinyProbability) entropy -= p[j] * std::log2(p[j]);
  }
  return entropy;
}

}  // namespace

TsneAffinities TsneAffinities::Compute(const Eigen::MatrixXd& x, double perplexity) {
  const int n = static_cast<int>(x.rows());
  if (n < 3) throw Error(ErrorCode::kInput, "t-SNE needs at least 3 points");
  if (!x.allFinite()) throw Error(ErrorCode::kInput, "t-SNE input has non-finite values");
  if (!(perplexity > 0.0) || !(perplexity < (n - 1) / 3.0)) {
    throw Error(ErrorCode::kConfig, "perplexity " + FormatSignificant(perplexity, 6) +
                                        " must be in (0, (n - 1) / 3) = (0, " +
                                        FormatSignificant((n - 1) / 3.0, 6) + ") for n=" +
                                        std::to_string(n));
  }
  TsneAffinities out;
  out.n_ = n;
  out.entropies_.assign(n, 0.0);
  const double target = std::log2(perplexity);
  const double max_duplicates = (n - 1) - 3.0 * perplexity;
  std::vector<std::vector<double>> conditional(n);
  std::vector<double> dist;
  for (int i = 0; i < n; ++i) {
    SquaredDistances(x, i, dist);
    int duplicates = 0;
    for (int j = 0; j < n; ++j) {
      if (j != i && dist[j] == 0.0) ++duplicates;
    }
    if (duplicates > max_duplicates) {
      throw Error(ErrorCode::kDegenerateInput,
                  "point " + std::to_string(i) + " has " + std::to_string(duplicates) +
                      " duplicates; affinities are degenerate at perplexity " +
                      FormatSignificant(perplexity, 6));
    }
    double beta = 1.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double entropy = Conditional(dist, i, beta, conditional[i]);
    for (int step = 0; step < kBandwidthSteps; ++step) {
      if (std::abs(entropy - target) <= kEntropyTolerance) break;
      if (entropy > target) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
      } else {
        hi = beta;
        beta = 0.5 * (beta + lo);
      }
      entropy = Conditional(dist, i, beta, conditional[i]);
    }
    out.entropies_[i] = entropy;
    if (std::abs(entropy - target) > kEntropyTolerance) out.uncalibrated_.push_back(i);
  }
  out.packed_.assign(static_cast<std::size_t>(n) * (n - 1) / 2, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      out.packed_[PackedIndex(n, i, j)] =
          (conditional[i][j] + conditional[j][i]) / (2.0 * n);
    }
  }
  return out;
}

double TsneAffinities::operator()(int i, int j) const {
  if (i == j) return 0.0;
  if (i > j) std::swap(i, j);
  return packed_[PackedIndex(n_, i, j)];
}

double TsneKl(const TsneAffinities& p, const Eigen::MatrixXd& y) {
  const int n = p.n();
  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) z += 2.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm());
  }
  double kl = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double pij = p.packed()[PackedIndex(n, i, j)];
      if (pij <= kTinyProbability) continue;
      const double q = 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm()) / z;
      kl += 2.0 * pij * std::log(pij / std::max(q, kTinyProbability));
    }
  }
  return std::max(0.0, kl);
}

TsneRun Tsne(const Eigen::MatrixXd& x, const TsneOptions& options) {
  if (options.iterations < 1) throw Error(ErrorCode::kConfig, "iterations must be >= 1");
  if (!(options.learning_rate > 0.0) || !(options.exaggeration >= 1.0)) {
    throw Error(ErrorCode::kConfig, "learning rate must be > 0 and exaggeration >= 1");
  }
  const TsneAffinities p = TsneAffinities::Compute(x, options.perplexity);
  const int n = p.n();
  const std::vector<double>& packed = p.packed();

  RngStream rng = RngStream::Derive(options.seed, {"tsne", "init"});
  Eigen::MatrixXd y(n, 2);
  for (int i = 0; i < n; ++i) {
    y(i, 0) = 1e-4 * rng.Normal();
    y(i, 1) = 1e-4 * rng.Normal();
  }
  TsneRun run;
  run.uncalibrated = p.uncalibrated();
  run.kl_initial = TsneKl(p, y);
  run.kl_after_exaggeration = run.kl_initial;

  Eigen::MatrixXd update = Eigen::MatrixXd::Zero(n, 2);
  Eigen::MatrixXd gains = Eigen::MatrixXd::Ones(n, 2);
  Eigen::MatrixXd grad(n, 2);
  for (int iter = 0; iter < options.iterations; ++iter) {
    const bool exaggerate = iter < options.exaggeration_iterations;
    const double scale = exaggerate ? options.exaggeration : 1.0;
    const double momentum =
        exaggerate ? options.initial_momentum : options.final_momentum;
    // First pass: normalizer. Second pass recomputes the kernel rather than
    // storing an n^2 buffer.
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
      const double yi0 = y(i, 0), yi1 = y(i, 1);
      for (int j = i + 1; j < n; ++j) {
        const double d0 = yi0 - y(j, 0), d1 = yi1 - y(j, 1);
        z += 1.0 / (1.0 + d0 * d0 + d1 * d1);
      }
    }
    z *= 2.0;
    grad.setZero();
    for (int i = 0; i < n; ++i) {
      const double yi0 = y(i, 0), yi1 = y(i, 1);
      // Offset of (i, i + 1) in the packed triangle.
      const std::size_t base = static_cast<std::size_t>(i) * (2 * static_cast<std::size_t>(n) - i - 1) / 2;
      double g0 = 0.0, g1 = 0.0;
      for (int j = i + 1; j < n; ++j) {
        const double d0 = yi0 - y(j, 0), d1 = yi1 - y(j, 1);
        const double num = 1.0 / (1.0 + d0 * d0 + d1 * d1);
        const double f = 4.0 * (scale * packed[base + (j - i - 1)] - num / z) * num;
        g0 += f * d0;
        g1 += f * d1;
        grad(j, 0) -= f * d0;
        grad(j, 1) -= f * d1;
      }
      grad(i, 0) += g0;
      grad(i, 1) += g1;
    }
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < 2; ++c) {
        const bool same_sign = (grad(i, c) > 0.0) == (update(i, c) > 0.0);
        gains(i, c) = same_sign ? std::max(kMinGain, gains(i, c) * 0.8) : gains(i, c) + 0.2;
        update(i, c) = momentum * update(i, c) - options.learning_rate * gains(i, c) * grad(i, c);
        y(i, c) += update(i, c);
      }
    }
    y.rowwise() -= y.colwise().mean();
    if (iter + 1 == options.exaggeration_iterations) run.kl_after_exaggeration = TsneKl(p, y);
  }
  if (!y.allFinite()) {
    throw Error(ErrorCode::kConvergence, "t-SNE layout diverged to non-finite coordinates");
  }
  run.kl_final = TsneKl(p, y);
  if (options.iterations <= options.exaggeration_iterations) {
    run.kl_after_exaggeration = run.kl_final;
  }
  run.coords = std::move(y);
  return run;
}

Projection2D ProjectTable(const features::FeatureTable& table, const TsneOptions& options) {
  Projection2D out;
  out.perplexity = options.perplexity;
  out.iterations = options.iterations;
  out.seed = options.seed;
  out.input_rows = table.size();
  std::vector<int> rows(table.size());
  std::iota(rows.begin(), rows.end(), 0);
  if (options.max_rows > 0 && table.size() > options.max_rows) {
    RngStream rng = RngStream::Derive(options.seed, {"tsne", "subsample"});
    rng.Shuffle(rows);
    rows.resize(options.max_rows);
    std::sort(rows.begin(), rows.end());
    out.warnings.push_back("subsampled " + std::to_string(table.size()) + " rows to " +
                           std::to_string(options.max_rows) + " for exact t-SNE");
  }
  const Eigen::MatrixXd all = table.Matrix();
  std::vector<int> kept;
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), all.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) x.row(r) = all.row(rows[r]);
  const Eigen::Index n = x.rows();
  if (n < 3) throw Error(ErrorCode::kInput, "t-SNE needs at least 3 rows");
  const Eigen::RowVectorXd mean = x.colwise().mean();
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double sd = std::sqrt((x.col(j).array() - mean(j)).square().sum() / (n - 1));
    if (sd > 1e-12) {
      x.col(j) = (x.col(j).array() - mean(j)) / sd;
      kept.push_back(static_cast<int>(j));
    }
  }
  if (kept.empty()) {
    throw Error(ErrorCode::kDegenerateInput, "every feature is constant; nothing to project");
  }
  Eigen::MatrixXd z(n, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) z.col(c) = x.col(kept[c]);
  if (options.pca_dims > 0 && z.cols() > options.pca_dims &&
      n > options.pca_dims) {
    z = Pca(z, options.pca_dims).projected;
  }
  const TsneRun run = Tsne(z, options);
  for (const int r : run.uncalibrated) {
    out.warnings.push_back("perplexity calibration missed tolerance for row " +
                           table.rows[rows[r]].key);
  }
  for (const int r : rows) {
    out.keys.push_back(table.rows[r].key);
    out.meta.push_back(table.rows[r].meta);
  }
  out.coords = run.coords;
  out.kl_initial = run.kl_initial;
  out.kl_after_exaggeration = run.kl_after_exaggeration;
  out.kl_final = run.kl_final;
  return out;
}

double NeighborPurity(const Eigen::MatrixXd& coords, const std::vector<std::string>& labels,
                      int k) {
  const int n = static_cast<int>(coords.rows());
  if (static_cast<int>(labels.size()) != n) {
    throw Error(ErrorCode::kInput, "label count does not match point count");
  }
  if (n < 2 || k < 1) throw Error(ErrorCode::kInput, "purity needs n >= 2 and k >= 1");
  k = std::min(k, n - 1);
  double total = 0.0;
  std::vector<std::pair<double, int>> dist;
  for (int i = 0; i < n; ++i) {
    dist.clear();
    for (int j = 0; j < n; ++j) {
      if (j != i) dist.emplace_back((coords.row(i) - coords.row(j)).squaredNorm(), j);
    }
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    int same = 0;
    for (int m = 0; m < k; ++m) same += labels[dist[m].second] == labels[i];
    total += static_cast<double>(same) / k;
  }
  return total / n;
}

std::string CoordsToCsv(const Projection2D& projection) {
  std::string out = "key,x,y\n";
  for (std::size_t i = 0; i < projection.keys.size(); ++i) {
    out += projection.keys[i] + "," + FormatSignificant(projection.coords(i, 0), 9) + "," +
           FormatSignificant(projection.coords(i, 1), 9) + "\n";
  }
  return out;
}

}  // namespace plateaudit::project
