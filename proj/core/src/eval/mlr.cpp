/*
 * Copyright (c) 2026 The ltp Authors
 *
 * Licensed under the Apache License, Version 2.0;
 * You may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an 'AS IS' BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "ltp/eval/mlr.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "ltp/error.hpp"

namespace ltp::eval {

MlrModel::MlrModel(std::vector<double> weights, double bias)
    : weights_(std::move(weights)), bias_(bias) {}

MlrModel MlrModel::fit(std::span<const std::vector<double>> features, std::span<const double> y,
                       double ridge) {
  if (features.size() != y.size()) throw ValidationError("mlr: misaligned samples");
  if (features.empty()) throw ValidationError("mlr: no samples");
  const auto p = static_cast<Eigen::Index>(features.front().size());
  const auto n = static_cast<Eigen::Index>(features.size());
  if (n < p + 1) {
    throw ValidationError("mlr: " + std::to_string(n) + " samples for " + std::to_string(p + 1) +
                          " coefficients");
  }
  // Augmented design [X 1]; normal equations in double precision.
  Eigen::MatrixXd x(n, p + 1);
  Eigen::VectorXd t(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& f = features[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(f.size()) != p) throw ValidationError("mlr: ragged features");
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = f[static_cast<std::size_t>(j)];
    x(i, p) = 1.0;
    t(i) = y[static_cast<std::size_t>(i)];
  }
  Eigen::MatrixXd gram = x.transpose() * x;
  gram.diagonal().head(p).array() += ridge;
  const Eigen::VectorXd coef = gram.ldlt().solve(x.transpose() * t);
  if (!coef.allFinite()) throw NumericalError("mlr: singular normal equations");
  std::vector<double> w(coef.data(), coef.data() + p);
  return MlrModel(std::move(w), coef(p));
}

MlrModel MlrModel::fit(std::span<const geo::NormalizedScene> train, double ridge) {
  std::vector<std::vector<double>> features;
  std::vector<double> y;
  for (const auto& sc : train) {
    const std::size_t width = static_cast<std::size_t>(sc.steps) * 3;
    for (int i = 0; i < sc.agents; ++i) {
      auto begin = sc.x.begin() + static_cast<std::ptrdiff_t>(i * width);
      features.emplace_back(begin, begin + static_cast<std::ptrdiff_t>(width));
      y.push_back(sc.y[static_cast<std::size_t>(i)]);
    }
  }
  return fit(features, y, ridge);
}

double MlrModel::predict_std(std::span<const double> features) const {
  if (features.size() != weights_.size()) {
    throw DimensionError("mlr: expected " + std::to_string(weights_.size()) + " features, got " +
                         std::to_string(features.size()));
  }
  double s = bias_;
  for (std::size_t j = 0; j < features.size(); ++j) s += weights_[j] * features[j];
  return s;
}

std::vector<double> MlrModel::predict(const geo::NormalizedScene& scene,
                                      const geo::NormStats& stats) const {
  const std::size_t width = static_cast<std::size_t>(scene.steps) * 3;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(scene.agents));
  for (int i = 0; i < scene.agents; ++i) {
    std::span<const double> f(scene.x.data() + i * width, width);
    out.push_back(stats.denormalize_target(predict_std(f)));
  }
  return out;
}

std::string MlrModel::to_json() const {
  return nlohmann::json{{"weights", weights_}, {"bias", bias_}}.dump();
}

MlrModel MlrModel::from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    return MlrModel(j.at("weights").get<std::vector<double>>(), j.at("bias").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("mlr: malformed model: ") + e.what());
  }
}

}  // namespace ltp::eval
