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


#include "ltp/app/dataset.hpp"

#include "ltp/error.hpp"
#include "ltp/geo/geodesy.hpp"
#include "ltp/geo/pchip.hpp"

namespace ltp::app {

std::vector<geo::TrajectoryTrack> preprocess_tracks(const std::vector<geo::TrajectoryTrack>& tracks,
                                                    const DataConfig& cfg, PipelineStats* stats) {
  std::vector<geo::TrajectoryTrack> out;
  out.reserve(tracks.size());
  std::size_t dropped = 0;
  for (const auto& t : tracks) {
    auto inside = geo::truncate_at_boundary(t, cfg.arp, cfg.ring_nm);
    if (!inside) {
      ++dropped;
      continue;
    }
    geo::TrajectoryTrack r = geo::pchip_resample(*inside, cfg.dt);
    if (r.points.size() < 2) {
      ++dropped;
      continue;
    }
    out.push_back(std::move(r));
  }
  if (stats) {
    stats->tracks_in = tracks.size();
    stats->tracks_dropped = dropped;
  }
  return out;
}

std::vector<geo::NormalizedScene> normalize_all(const std::vector<geo::Scene>& scenes,
                                                const geo::NormStats& stats) {
  std::vector<geo::NormalizedScene> out;
  out.reserve(scenes.size());
  for (const auto& s : scenes) out.push_back(geo::normalize_scene(s, stats));
  return out;
}

PreparedData prepare_data(const std::vector<geo::TrajectoryTrack>& tracks, const RunConfig& cfg) {
  PreparedData d;
  const auto resampled = preprocess_tracks(tracks, cfg.data, &d.info);
  geo::SceneOptions so;
  so.steps = cfg.data.steps;
  so.dt = cfg.data.dt;
  so.max_agents = cfg.data.max_agents;
  geo::SceneBuildStats bs;
  auto scenes = geo::build_scenes(resampled, so, &bs);
  d.info.scenes = bs.scenes;
  d.info.truncated_scenes = bs.truncated_scenes;

  geo::SplitOptions opt;
  opt.ratios = cfg.data.split;
  opt.seed = cfg.seed;
  opt.flights_per_group = cfg.data.flights_per_group;
  geo::DatasetSplit split = geo::split_dataset(std::move(scenes), opt);
  d.info.dropped_mixed = split.dropped_mixed;
  d.train = std::move(split.train);
  d.val = std::move(split.val);
  d.test = std::move(split.test);

  const auto& t = cfg.train;
  if (t.overfit_scenes > 0) {
    if (d.train.size() > static_cast<std::size_t>(t.overfit_scenes)) d.train.resize(t.overfit_scenes);
    d.val = d.train;
  } else if (t.max_train_scenes > 0 && d.train.size() > static_cast<std::size_t>(t.max_train_scenes)) {
    std::vector<geo::Scene> kept;
    const double stride = static_cast<double>(d.train.size()) / t.max_train_scenes;
    for (int i = 0; i < t.max_train_scenes; ++i) {
      kept.push_back(std::move(d.train[static_cast<std::size_t>(i * stride)]));
    }
    d.train = std::move(kept);
  }
  if (d.train.empty()) throw ValidationError("no training scenes after preprocessing");

  d.stats = geo::fit_norm_stats(d.train);
  d.train_n = normalize_all(d.train, d.stats);
  d.val_n = normalize_all(d.val, d.stats);
  d.test_n = normalize_all(d.test, d.stats);
  return d;
}

}  // namespace ltp::app
