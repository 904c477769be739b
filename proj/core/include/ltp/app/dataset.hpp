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

#include <cstddef>
#include <vector>

#include "ltp/app/run_config.hpp"
#include "ltp/geo/scene.hpp"
#include "ltp/geo/track.hpp"

namespace ltp::app {

struct PipelineStats {
  std::size_t tracks_in = 0;
  /// Tracks that never ended inside the boundary or were too short.
  std::size_t tracks_dropped = 0;
  std::size_t scenes = 0;
  std::size_t truncated_scenes = 0;
  std::size_t dropped_mixed = 0;
};

/// Boundary truncation followed by resampling onto the common grid.
std::vector<geo::TrajectoryTrack> preprocess_tracks(const std::vector<geo::TrajectoryTrack>& tracks,
                                                    const DataConfig& cfg,
                                                    PipelineStats* stats = nullptr);

struct PreparedData {
  std::vector<geo::Scene> train, val, test;
  geo::NormStats stats;
  std::vector<geo::NormalizedScene> train_n, val_n, test_n;
  PipelineStats info;
};

/// Tracks -> scenes -> group split -> normalization (fitted on train).
/// Honors the overfit and max_train_scenes settings of `cfg.train`.
PreparedData prepare_data(const std::vector<geo::TrajectoryTrack>& tracks, const RunConfig& cfg);

std::vector<geo::NormalizedScene> normalize_all(const std::vector<geo::Scene>& scenes,
                                                const geo::NormStats& stats);

}  // namespace ltp::app
