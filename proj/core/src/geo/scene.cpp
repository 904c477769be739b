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

#include "ltp/geo/scene.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>

#include "ltp/error.hpp"
#include "ltp/rng.hpp"

namespace ltp::geo {
namespace {

std::string format_time(double t) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, t);
  return std::string(buf, end);
}

struct GridTrack {
  const TrajectoryTrack* track;
  long long k_first;
  long long k_last;
};

}  // namespace

std::vector<Scene> build_scenes(std::span<const TrajectoryTrack> tracks, const SceneOptions& opt,
                                SceneBuildStats* stats) {
  if (opt.steps < 1 || !(opt.dt > 0)) throw ValidationError("build_scenes: bad options");
  std::vector<GridTrack> grid;
  grid.reserve(tracks.size());
  long long k_min = 0, k_max = -1;
  for (const auto& tr : tracks) {
    validate(tr, 1);
    const auto k_first = std::llround(tr.t_first() / opt.dt);
    const auto k_last = std::llround(tr.t_last() / opt.dt);
    if (static_cast<long long>(tr.points.size()) != k_last - k_first + 1) {
      throw ValidationError("build_scenes: track '" + tr.callsign +
                            "' is not sampled on a contiguous grid");
    }
    for (std::size_t i = 0; i < tr.points.size(); ++i) {
      const double expect = static_cast<double>(k_first + static_cast<long long>(i)) * opt.dt;
      if (std::abs(tr.points[i].t - expect) > 1e-6 * std::max(1.0, std::abs(expect))) {
        throw ValidationError("build_scenes: track '" + tr.callsign + "' is off the grid");
      }
    }
    if (grid.empty()) {
      k_min = k_first;
      k_max = k_last;
    }
    k_min = std::min(k_min, k_first);
    k_max = std::max(k_max, k_last);
    grid.push_back({&tr, k_first, k_last});
  }

  std::vector<Scene> scenes;
  SceneBuildStats local;
  for (long long k_end = k_min + opt.steps - 1; k_end <= k_max; ++k_end) {
    Scene scene;
    scene.t_end = static_cast<double>(k_end) * opt.dt;
    scene.dt = opt.dt;
    for (const auto& g : grid) {
      if (g.k_first > k_end - (opt.steps - 1) || g.k_last <= k_end) continue;
      const TrajectoryTrack& tr = *g.track;
      SceneAgent agent;
      agent.callsign = tr.callsign;
      agent.wtc = tr.wtc;
      const auto start = static_cast<std::size_t>(k_end - (opt.steps - 1) - g.k_first);
      agent.window.reserve(opt.steps);
      for (int s = 0; s < opt.steps; ++s) {
        const TrackPoint& p = tr.points[start + s];
        agent.window.push_back({p.lat, p.lon, p.alt});
      }
      agent.remaining_s = tr.t_last() - scene.t_end;
      scene.agents.push_back(std::move(agent));
    }
    if (scene.agents.empty()) continue;
    scene.scene_id = "t" + format_time(scene.t_end);
    if (truncate_agents(scene, opt.max_agents)) ++local.truncated_scenes;
    scenes.push_back(std::move(scene));
  }
  local.scenes = scenes.size();
  if (stats) *stats = local;
  return scenes;
}

bool truncate_agents(Scene& scene, int max_agents) {
  if (max_agents < 1) throw ValidationError("max_agents must be >= 1");
  if (scene.agent_count() <= max_agents) return false;
  std::vector<std::size_t> order(scene.agents.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scene.agents[a].remaining_s < scene.agents[b].remaining_s;
  });
  order.resize(static_cast<std::size_t>(max_agents));
  std::sort(order.begin(), order.end());
  std::vector<SceneAgent> kept;
  for (std::size_t i : order) kept.push_back(std::move(scene.agents[i]));
  scene.agents = std::move(kept);
  return true;
}

void validate(const Scene& scene, const SceneOptions& opt) {
  const std::string who = "scene '" + scene.scene_id + "': ";
  if (scene.agents.empty() || scene.agent_count() > opt.max_agents) {
    throw ValidationError(who + "agent count " + std::to_string(scene.agent_count()) +
                          " outside [1, " + std::to_string(opt.max_agents) + "]");
  }
  if (scene.dt != opt.dt) throw ValidationError(who + "unexpected dt");
  for (const auto& a : scene.agents) {
    if (static_cast<int>(a.window.size()) != opt.steps) {
      throw ValidationError(who + "agent '" + a.callsign + "' window has " +
                            std::to_string(a.window.size()) + " steps");
    }
    if (!(a.remaining_s > 0) || !std::isfinite(a.remaining_s)) {
      throw ValidationError(who + "agent '" + a.callsign + "' has non-positive label");
    }
    for (const auto& row : a.window)
      for (double v : row)
        if (!std::isfinite(v)) throw ValidationError(who + "non-finite window value");
  }
}

std::array<std::size_t, 3> split_counts(std::size_t groups, const SplitRatios& r) {
  const double total = r.train + r.val + r.test;
  if (!(total > 0) || r.train < 0 || r.val < 0 || r.test < 0) {
    throw ValidationError("split ratios must be non-negative with a positive sum");
  }
  if (groups < 3) {
    throw ValidationError("split needs at least 3 groups, got " + std::to_string(groups));
  }
  const auto g = static_cast<double>(groups);
  std::size_t val = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(g * r.val / total)));
  std::size_t test = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(g * r.test / total)));
  while (val + test > groups - 1) {
    if (val >= test && val > 1) --val;
    else if (test > 1) --test;
    else break;
  }
  return {groups - val - test, val, test};
}

DatasetSplit split_dataset(std::vector<Scene> scenes, const SplitOptions& opt) {
  if (opt.flights_per_group < 1) throw ValidationError("flights_per_group must be >= 1");
  std::map<std::string, double> landing;
  for (const auto& s : scenes)
    for (const auto& a : s.agents) landing.emplace(a.callsign, s.t_end + a.remaining_s);

  std::vector<std::pair<double, std::string>> flights;
  flights.reserve(landing.size());
  for (const auto& [cs, t] : landing) flights.emplace_back(t, cs);
  std::sort(flights.begin(), flights.end());

  const std::size_t groups =
      (flights.size() + static_cast<std::size_t>(opt.flights_per_group) - 1) /
      static_cast<std::size_t>(opt.flights_per_group);
  const auto counts = split_counts(groups, opt.ratios);

  std::vector<std::size_t> order(groups);
  std::iota(order.begin(), order.end(), 0);
  Rng rng = Rng::substream(opt.seed, "split");
  rng.shuffle(order);
  std::vector<int> split_of_group(groups);
  for (std::size_t i = 0; i < groups; ++i) {
    split_of_group[order[i]] = i < counts[0] ? 0 : (i < counts[0] + counts[1] ? 1 : 2);
  }
  std::map<std::string, int> split_of_flight;
  for (std::size_t i = 0; i < flights.size(); ++i) {
    split_of_flight[flights[i].second] =
        split_of_group[i / static_cast<std::size_t>(opt.flights_per_group)];
  }

  DatasetSplit out;
  out.groups = groups;
  out.groups_per_split = counts;
  for (auto& s : scenes) {
    const int first = split_of_flight.at(s.agents.front().callsign);
    const bool same = std::all_of(s.agents.begin(), s.agents.end(), [&](const SceneAgent& a) {
      return split_of_flight.at(a.callsign) == first;
    });
    if (!same) {
      ++out.dropped_mixed;
      continue;
    }
    (first == 0 ? out.train : first == 1 ? out.val : out.test).push_back(std::move(s));
  }
  return out;
}

NormStats fit_norm_stats(std::span<const Scene> train) {
  std::array<double, kChannels> sum{}, sq{};
  double n = 0, ty = 0, tyy = 0, ny = 0;
  for (const auto& s : train) {
    for (const auto& a : s.agents) {
      for (const auto& row : a.window) {
        for (int c = 0; c < kChannels; ++c) sum[c] += row[c];
        n += 1;
      }
      ty += a.remaining_s;
      ny += 1;
    }
  }
  if (ny == 0) throw ValidationError("fit_norm_stats: empty training set");
  NormStats st;
  for (int c = 0; c < kChannels; ++c) st.mean[c] = sum[c] / n;
  st.target_mean = ty / ny;
  for (const auto& s : train) {
    for (const auto& a : s.agents) {
      for (const auto& row : a.window)
        for (int c = 0; c < kChannels; ++c) sq[c] += (row[c] - st.mean[c]) * (row[c] - st.mean[c]);
      tyy += (a.remaining_s - st.target_mean) * (a.remaining_s - st.target_mean);
    }
  }
  static constexpr const char* kNames[] = {"lat", "lon", "alt"};
  for (int c = 0; c < kChannels; ++c) {
    st.std[c] = std::sqrt(sq[c] / n);
    if (!(st.std[c] > 0)) {
      throw ValidationError(std::string("fit_norm_stats: zero variance in channel ") + kNames[c]);
    }
  }
  st.target_std = std::sqrt(tyy / ny);
  if (!(st.target_std > 0)) throw ValidationError("fit_norm_stats: zero variance in target");
  return st;
}

NormalizedScene normalize_scene(const Scene& scene, const NormStats& st) {
  NormalizedScene out;
  out.scene_id = scene.scene_id;
  out.t_end = scene.t_end;
  out.agents = scene.agent_count();
  out.steps = scene.agents.empty() ? 0 : static_cast<int>(scene.agents.front().window.size());
  out.x.reserve(static_cast<std::size_t>(out.agents) * out.steps * kChannels);
  for (const auto& a : scene.agents) {
    if (static_cast<int>(a.window.size()) != out.steps) {
      throw DimensionError("normalize_scene: ragged windows in scene " + scene.scene_id);
    }
    for (const auto& row : a.window)
      for (int c = 0; c < kChannels; ++c) out.x.push_back((row[c] - st.mean[c]) / st.std[c]);
    out.y.push_back(st.normalize_target(a.remaining_s));
    out.wtcs.push_back(a.wtc);
    out.callsigns.push_back(a.callsign);
  }
  return out;
}

Scene denormalize_scene(const NormalizedScene& ns, const NormStats& st, double dt) {
  Scene s;
  s.scene_id = ns.scene_id;
  s.t_end = ns.t_end;
  s.dt = dt;
  for (int i = 0; i < ns.agents; ++i) {
    SceneAgent a;
    a.callsign = ns.callsigns[i];
    a.wtc = ns.wtcs[i];
    for (int t = 0; t < ns.steps; ++t) {
      std::array<double, kChannels> row{};
      for (int c = 0; c < kChannels; ++c) {
        row[c] = ns.x[(static_cast<std::size_t>(i) * ns.steps + t) * kChannels + c] * st.std[c] +
                 st.mean[c];
      }
      a.window.push_back(row);
    }
    a.remaining_s = st.denormalize_target(ns.y[i]);
    s.agents.push_back(std::move(a));
  }
  return s;
}

}  // namespace ltp::geo
