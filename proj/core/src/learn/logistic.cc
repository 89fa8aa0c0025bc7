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

#include "plateaudit/learn/logistic.h"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "plateaudit/core/error.h"

namespace plateaudit::learn {
namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

Eigen::MatrixXd Softmax(const Eigen::MatrixXd& scores) {
  Eigen::MatrixXd p(scores.rows(), scores.cols());
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    const double top = scores.row(i).maxCoeff();
    double total = 0.0;
    for (Eigen::Index k = 0; k < scores.cols(); ++k) {
      p(i, k) = std::exp(scores(i, k) - top);
      total += p(i, k);
    }
    p.row(i) /= total;
  }
  return p;
}

Eigen::MatrixXd Standardize(const LogisticModel& model, const Eigen::MatrixXd& x) {
  Eigen::MatrixXd z(x.rows(), static_cast<Eigen::Index>(model.kept_features.size()));
  for (std::size_t j = 0; j < model.kept_features.size(); ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    z.col(col) = (x.col(model.kept_features[j]).array() - model.mean(col)) /
                 model.scale(col);
  }
  return z;
}

double InfNorm(const Objective& o) {
  double norm = o.grad_intercepts.size() ? o.grad_intercepts.cwiseAbs().maxCoeff() : 0.0;
  if (o.grad_weights.size()) norm = std::max(norm, o.grad_weights.cwiseAbs().maxCoeff());
  return norm;
}

}  // namespace

Objective LogisticObjective(const Eigen::MatrixXd& z, std::span<const int> y,
                            const Eigen::MatrixXd& weights,
                            const Eigen::VectorXd& intercepts, double lambda) {
  const Eigen::Index n = z.rows();
  const Eigen::Index k = intercepts.size();
  Eigen::MatrixXd scores = z * weights;
  scores.rowwise() += intercepts.transpose();
  Objective out;
  double nll = 0.0;
  Eigen::MatrixXd residual(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double top = scores.row(i).maxCoeff();
    double total = 0.0;
    for (Eigen::Index c = 0; c < k; ++c) {
      residual(i, c) = std::exp(scores(i, c) - top);
      total += residual(i, c);
    }
    nll -= scores(i, y[i]) - top - std::log(total);
    residual.row(i) /= total;
    residual(i, y[i]) -= 1.0;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  out.loss = nll * inv_n + 0.5 * lambda * weights.squaredNorm();
  residual *= inv_n;
  out.grad_weights = z.transpose() * residual + lambda * weights;
  out.grad_intercepts = residual.colwise().sum().transpose();
  return out;
}

LogisticModel TrainLogistic(const Eigen::MatrixXd& x, std::span<const int> y,
                            std::vector<std::string> classes,
                            const LogisticOptions& options,
                            std::vector<std::string> feature_names) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  const int k = static_cast<int>(classes.size());
  if (static_cast<Eigen::Index>(y.size()) != n) {
    throw Error(ErrorCode::kInput, "label count does not match row count");
  }
  if (feature_names.empty()) {
    for (Eigen::Index j = 0; j < d; ++j) feature_names.push_back("x" + std::to_string(j));
  }
  if (static_cast<Eigen::Index>(feature_names.size()) != d) {
    throw Error(ErrorCode::kInput, "feature name count does not match columns");
  }
  if (!(options.lambda >= 0.0)) throw Error(ErrorCode::kInput, "lambda must be >= 0");
  std::set<int> present;
  for (const int label : y) {
    if (label < 0 || label >= k) throw Error(ErrorCode::kInput, "label out of range");
    present.insert(label);
  }
  if (k < 2 || present.size() < 2) {
    throw Error(ErrorCode::kDegenerateInput,
                "training labels contain a single class");
  }
  if (n < k) throw Error(ErrorCode::kInput, "fewer rows than classes");
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (!std::isfinite(x(i, j))) {
        throw Error(ErrorCode::kInput, "non-finite feature '" + feature_names[j] +
                                           "' in row " + std::to_string(i));
      }
    }
  }

  LogisticModel model;
  model.classes = std::move(classes);
  model.feature_names = std::move(feature_names);
  model.lambda = options.lambda;
  std::vector<double> means;
  std::vector<double> scales;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double mean = x.col(j).mean();
    const double var = (x.col(j).array() - mean).square().mean();
    const double sd = std::sqrt(var);
    if (sd > 1e-12 * (1.0 + std::abs(mean))) {
      model.kept_features.push_back(static_cast<int>(j));
      means.push_back(mean);
      scales.push_back(sd);
    } else {
      model.dropped_features.push_back(model.feature_names[j]);
    }
  }
  model.mean = Eigen::Map<Eigen::VectorXd>(means.data(), static_cast<Eigen::Index>(means.size()));
  model.scale = Eigen::Map<Eigen::VectorXd>(scales.data(), static_cast<Eigen::Index>(scales.size()));
  const Eigen::MatrixXd z = Standardize(model, x);
  const Eigen::Index dk = z.cols();

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(dk, k);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
  Objective current = LogisticObjective(z, y, w, b, options.lambda);
  ConvergenceRecord& record = model.convergence;
  record.loss_history.push_back(current.loss);
  double step = 1.0;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    if (InfNorm(current) < options.tol) break;
    const double grad_sq =
        current.grad_weights.squaredNorm() + current.grad_intercepts.squaredNorm();
    double alpha = step;
    bool accepted = false;
    Eigen::MatrixXd w_next;
    Eigen::VectorXd b_next;
    Objective next;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      w_next = w - alpha * current.grad_weights;
      b_next = b - alpha * current.grad_intercepts;
      next = LogisticObjective(z, y, w_next, b_next, options.lambda);
      if (std::isfinite(next.loss) &&
          next.loss <= current.loss - kArmijo * alpha * grad_sq) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    // No sufficient decrease at any step length: we are at the precision
    // floor of the objective.
    if (!accepted) break;

    const double ss = (w_next - w).squaredNorm() + (b_next - b).squaredNorm();
    const double sy =
        (w_next - w).cwiseProduct(next.grad_weights - current.grad_weights).sum() +
        (b_next - b).dot(next.grad_intercepts - current.grad_intercepts);
    step = sy > 0.0 ? std::clamp(ss / sy, 1e-8, 1e8) : std::min(2.0 * alpha, 1e8);

    w = std::move(w_next);
    b = std::move(b_next);
    current = std::move(next);
    record.loss_history.push_back(current.loss);
    record.iterations = iter + 1;
  }
  record.gradient_norm = InfNorm(current);
  record.converged = record.gradient_norm < options.tol;
  model.weights = std::move(w);
  model.intercepts = std::move(b);
  return model;
}

Eigen::MatrixXd PredictProba(const LogisticModel& model, const Eigen::MatrixXd& x) {
  if (x.cols() != model.input_dim()) {
    throw Error(ErrorCode::kSchema,
                "model expects " + std::to_string(model.input_dim()) +
                    " features, got " + std::to_string(x.cols()));
  }
  Eigen::MatrixXd scores = Standardize(model, x) * model.weights;
  scores.rowwise() += model.intercepts.transpose();
  return Softmax(scores);
}

Eigen::MatrixXd PredictProbaNamed(const LogisticModel& model,
                                  const Eigen::MatrixXd& x,
                                  std::span<const std::string> column_names) {
  if (static_cast<Eigen::Index>(column_names.size()) != x.cols()) {
    throw Error(ErrorCode::kInput, "column name count does not match columns");
  }
  Eigen::MatrixXd ordered(x.rows(), model.input_dim());
  std::string missing;
  for (int j = 0; j < model.input_dim(); ++j) {
    const auto it = std::find(column_names.begin(), column_names.end(),
                              model.feature_names[j]);
    if (it == column_names.end()) {
      missing += (missing.empty() ? "" : ", ") + model.feature_names[j];
      continue;
    }
    ordered.col(j) = x.col(it - column_names.begin());
  }
  if (!missing.empty()) {
    throw Error(ErrorCode::kSchema, "missing features: " + missing);
  }
  return PredictProba(model, ordered);
}

std::vector<int> ArgmaxRows(const Eigen::MatrixXd& probabilities) {
  std::vector<int> out(probabilities.rows());
  for (Eigen::Index i = 0; i < probabilities.rows(); ++i) {
    int best = 0;
    for (Eigen::Index k = 1; k < probabilities.cols(); ++k) {
      if (probabilities(i, k) > probabilities(i, best)) best = static_cast<int>(k);
    }
    out[i] = best;
  }
  return out;
}

std::string LogisticModelToJson(const LogisticModel& model) {
  using nlohmann::json;
  json weights = json::array();
  for (Eigen::Index i = 0; i < model.weights.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < model.weights.cols(); ++k) row.push_back(model.weights(i, k));
    weights.push_back(std::move(row));
  }
  const auto vec = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  json out{{"classes", model.classes},
           {"feature_names", model.feature_names},
           {"kept_features", model.kept_features},
           {"dropped_features", model.dropped_features},
           {"mean", vec(model.mean)},
           {"scale", vec(model.scale)},
           {"weights", weights},
           {"intercepts", vec(model.intercepts)},
           {"lambda", model.lambda},
           {"convergence",
            {{"iterations", model.convergence.iterations},
             {"gradient_norm", model.convergence.gradient_norm},
             {"converged", model.convergence.converged},
             {"final_loss", model.convergence.loss_history.empty()
                                ? 0.0
                                : model.convergence.loss_history.back()}}}};
  return out.dump(2) + "\n";
}

LogisticModel LogisticModelFromJson(const std::string& text) {
  using nlohmann::json;
  LogisticModel model;
  try {
    const json in = json::parse(text);
    model.classes = in.at("classes").get<std::vector<std::string>>();
    model.feature_names = in.at("feature_names").get<std::vector<std::string>>();
    model.kept_features = in.at("kept_features").get<std::vector<int>>();
    model.dropped_features = in.at("dropped_features").get<std::vector<std::string>>();
    const auto to_vec = [](const json& j) {
      const auto v = j.get<std::vector<double>>();
      return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    };
    model.mean = to_vec(in.at("mean"));
    model.scale = to_vec(in.at("scale"));
    model.intercepts = to_vec(in.at("intercepts"));
    const json& weights = in.at("weights");
    model.weights.resize(static_cast<Eigen::Index>(weights.size()),
                         static_cast<Eigen::Index>(model.classes.size()));
    for (std::size_t i = 0; i < weights.size(); ++i) {
      for (std::size_t k = 0; k < model.classes.size(); ++k) {
        model.weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
            weights.at(i).at(k).get<double>();
      }
    }
    model.lambda = in.at("lambda").get<double>();
    const json& conv = in.at("convergence");
    model.convergence.iterations = conv.at("iterations").get<int>();
    model.convergence.gradient_norm = conv.at("gradient_norm").get<double>();
    model.convergence.converged = conv.at("converged").get<bool>();
    model.convergence.loss_history = {conv.at("final_loss").get<double>()};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("logistic model: ") + e.what());
  }
  const auto dk = static_cast<Eigen::Index>(model.kept_features.size());
  if (model.classes.size() < 2 || model.mean.size() != dk || model.scale.size() != dk ||
      model.weights.rows() != dk ||
      model.intercepts.size() != static_cast<Eigen::Index>(model.classes.size())) {
    throw Error(ErrorCode::kFormat, "logistic model: inconsistent dimensions");
  }
  for (const int j : model.kept_features) {
    if (j < 0 || j >= model.input_dim()) {
      throw Error(ErrorCode::kFormat, "logistic model: kept feature out of range");
    }
  }
  return model;
}

}  // namespace plateaudit::learn
