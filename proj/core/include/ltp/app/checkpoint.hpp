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


#pragma once

#include <filesystem>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "ltp/app/run_config.hpp"
#include "ltp/eval/mlr.hpp"
#include "ltp/geo/scene.hpp"
#include "ltp/model/model.hpp"
#include "ltp/numerics/optim.hpp"

namespace ltp::app {

struct TrainState {
  /// Completed epochs.
  int epoch = 0;
  double best_val = std::numeric_limits<double>::infinity();
  int best_epoch = 0;
  int bad_epochs = 0;
};

/// Self-contained training snapshot: prediction needs nothing else.
struct Checkpoint {
  RunConfig config;
  geo::NormStats stats;
  TrainState state;
  std::unique_ptr<model::LandingTimeModel> model;
  std::optional<num::AdamWState> adam;
  std::optional<eval::MlrModel> mlr;
};

void save_checkpoint(const std::filesystem::path& path, const RunConfig& cfg,
                     const geo::NormStats& stats, const TrainState& state,
                     const model::LandingTimeModel& model, const num::AdamWState* adam,
                     const eval::MlrModel* mlr);

/// Throws IoError / ValidationError on unreadable or inconsistent files.
Checkpoint load_checkpoint(const std::filesystem::path& path);

std::string norm_stats_to_json(const geo::NormStats& stats);
geo::NormStats norm_stats_from_json(const std::string& text);

}  // namespace ltp::app
