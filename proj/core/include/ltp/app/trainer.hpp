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
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "ltp/app/checkpoint.hpp"
#include "ltp/app/dataset.hpp"
#include "ltp/model/model.hpp"

namespace ltp::app {

struct EpochLog {
  int epoch = 0;  // 1-based
  double lr = 0.0;
  double train_nll = 0.0;
  double val_nll = 0.0;
  double wall_s = 0.0;
};

struct TrainOptions {
  /// Best-val checkpoint. The latest state goes to `<checkpoint>.last`.
  std::filesystem::path checkpoint;
  /// CSV log (epoch,lr,train_nll,val_nll,wall_s); empty disables.
  std::filesystem::path log;
  /// Continue from `<checkpoint>.last` when it exists.
  bool resume = false;
  std::function<void(const EpochLog&)> on_epoch;
};

struct TrainResult {
  TrainState state;
  std::vector<EpochLog> epochs;
  bool early_stopped = false;
  /// Parameters after the last completed epoch.
  std::unique_ptr<model::LandingTimeModel> model;
};

/// Runs the training loop described by `cfg.train`. Throws NumericalError
/// when the loss or a gradient turns non-finite; checkpoints written before
/// that point stay intact.
TrainResult train(const PreparedData& data, const RunConfig& cfg, const TrainOptions& options);

std::filesystem::path last_checkpoint_path(const std::filesystem::path& checkpoint);

/// Mean per-scene NLL in eval mode (standardized units).
double evaluate_nll(const model::LandingTimeModel& model,
                    std::span<const geo::NormalizedScene> scenes, int threads = 1);

/// Eval-mode predictions for every scene, in scene order.
std::vector<std::vector<model::GaussianPrediction>> predict_all(
    const model::LandingTimeModel& model, std::span<const geo::NormalizedScene> scenes,
    const geo::NormStats& stats, int threads = 1);

/// Runs fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace ltp::app
