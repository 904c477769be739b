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

#include <cstdint>
#include <filesystem>
#include <string>

#include "ltp/geo/geodesy.hpp"
#include "ltp/geo/scene.hpp"
#include "ltp/model/config.hpp"
#include "ltp/numerics/optim.hpp"

namespace ltp::app {

struct DataConfig {
  int steps = 20;
  double dt = 6.0;
  int max_agents = 16;
  /// Terminal-area boundary used for truncation.
  geo::LatLon arp{37.4602, 126.4407};
  double ring_nm = 70.0;
  geo::SplitRatios split;
  int flights_per_group = 25;
};

struct OptimConfig {
  num::LrSchedule schedule;
  num::AdamWOptions adamw;
};

struct TrainConfig {
  int epochs = 300;
  int batch_scenes = 64;
  /// Stop after this many epochs without a val improvement; 0 disables.
  int patience = 0;
  int device_threads = 1;
  /// Scenes per gradient-accumulation chunk. Results depend on this value
  /// but not on the thread count.
  int chunk_scenes = 8;
  /// When > 0, train on the first K training scenes and validate on the
  /// same scenes.
  int overfit_scenes = 0;
  /// When > 0, keep only this many training scenes (evenly strided).
  int max_train_scenes = 0;
};

/// Everything needed to reproduce a run. Stored inside every checkpoint.
struct RunConfig {
  std::uint64_t seed = 42;
  DataConfig data;
  model::ModelConfig model;
  OptimConfig optim;
  TrainConfig train;
};

/// Reads a TOML or JSON file; absent keys keep their defaults.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig run_config_from_json(const std::string& text);
std::string run_config_to_json(const RunConfig& cfg);
/// Throws ValidationError on inconsistent settings.
void validate(const RunConfig& cfg);

}  // namespace ltp::app
