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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ltp/geo/track.hpp"

namespace ltp::geo {

inline constexpr int kChannels = 3;  // lat, lon, alt

struct SceneAgent {
  std::string callsign;
  Wtc wtc = Wtc::Medium;
  /// steps x (lat, lon, alt), oldest first.
  std::vector<std::array<double, kChannels>> window;
  double remaining_s = 0.0;
};

/// All aircraft with a full observation history ending at t_end.
struct Scene {
  std::string scene_id;
  double t_end = 0.0;
  double dt = 6.0;
  std::vector<SceneAgent> agents;

  int agent_count() const { return static_cast<int>(agents.size()); }
};

struct SceneOptions {
  int steps = 20;
  double dt = 6.0;
  /// Maximum agents per scene; larger scenes keep the max_agents aircraft
  /// closest to landing.
  int max_agents = 16;
};

struct SceneBuildStats {
  std::size_t scenes = 0;
  std::size_t truncated_scenes = 0;
};

/// Sliding-window scene construction over tracks resampled on a common
/// dt grid. An aircraft joins the scene ending at t_end when it has all
/// `steps` grid samples ending at t_end and lands strictly after t_end; its
/// label is t_last - t_end. Scenes without aircraft are not emitted. Agent
/// order follows the input track order.
std::vector<Scene> build_scenes(std::span<const TrajectoryTrack> tracks,
                                const SceneOptions& options = {},
                                SceneBuildStats* stats = nullptr);

/// Throws ValidationError if the scene breaks its invariants (window
/// length, positive labels, agent count within [1, max_agents]).
void validate(const Scene& scene, const SceneOptions& options = {});

/// Keeps the `max_agents` aircraft with the smallest remaining time,
/// preserving their relative order. Returns true if agents were dropped.
bool truncate_agents(Scene& scene, int max_agents);

// ---------------------------------------------------------------------------
// Splitting

struct SplitRatios {
  double train = 8, val = 1, test = 1;
};

struct SplitOptions {
  SplitRatios ratios;
  std::uint64_t seed = 0;
  /// Flights per group, consecutive by landing time.
  int flights_per_group = 25;
};

struct DatasetSplit {
  std::vector<Scene> train, val, test;
  std::size_t groups = 0;
  std::array<std::size_t, 3> groups_per_split{};
  /// Scenes whose aircraft belong to groups in different splits.
  std::size_t dropped_mixed = 0;
};

/// Group-wise split. Flights (identified by callsign) are ordered by
/// landing time and chunked into groups; groups are shuffled with the seed
/// and assigned to train/val/test in the given ratio (each split gets at
/// least one group). A scene is kept only when all its aircraft fall in one
/// split, so no aircraft contributes windows to two splits. Throws
/// ValidationError with fewer than three groups.
DatasetSplit split_dataset(std::vector<Scene> scenes, const SplitOptions& options);

/// Number of groups assigned to (train, val, test) for `groups` groups.
std::array<std::size_t, 3> split_counts(std::size_t groups, const SplitRatios& ratios);

// ---------------------------------------------------------------------------
// Normalization

/// Per-channel z-score statistics fitted on the training split.
struct NormStats {
  std::array<double, kChannels> mean{};
  std::array<double, kChannels> std{};
  double target_mean = 0.0;
  double target_std = 1.0;

  double normalize_target(double seconds) const { return (seconds - target_mean) / target_std; }
  double denormalize_target(double z) const { return z * target_std + target_mean; }
};

/// Throws ValidationError on an empty set or a zero-variance channel.
NormStats fit_norm_stats(std::span<const Scene> train);

/// Scene arrays in standardized units.
struct NormalizedScene {
  std::string scene_id;
  double t_end = 0.0;
  int agents = 0;
  int steps = 0;
  /// agents x steps x 3, row-major.
  std::vector<double> x;
  /// standardized remaining time per agent.
  std::vector<double> y;
  std::vector<Wtc> wtcs;
  std::vector<std::string> callsigns;
};

NormalizedScene normalize_scene(const Scene& scene, const NormStats& stats);
/// Inverse of normalize_scene for the window and labels.
Scene denormalize_scene(const NormalizedScene& scene, const NormStats& stats, double dt = 6.0);

}  // namespace ltp::geo
