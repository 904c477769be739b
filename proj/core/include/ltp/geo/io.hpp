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
#include <iosfwd>
#include <string>
#include <vector>

#include "ltp/geo/scene.hpp"
#include "ltp/geo/track.hpp"

namespace ltp::geo {

enum class TrackFormat { Csv, JsonLines };

/// .csv -> Csv; .jsonl/.ndjson/.json -> JsonLines.
TrackFormat track_format_for(const std::filesystem::path& path);

/// CSV with header `callsign,wtc,t,lat,lon,alt`, one row per point; rows of
/// a track are contiguous. JSON-lines: one
/// `{"callsign":..,"wtc":..,"points":[[t,lat,lon,alt],...]}` per line.
/// Numbers are written in shortest round-trip form.
void write_tracks(std::ostream& out, const std::vector<TrajectoryTrack>& tracks, TrackFormat format);
void write_tracks(const std::filesystem::path& path, const std::vector<TrajectoryTrack>& tracks);

/// Parses and validates every track. Throws ValidationError/IoError with a
/// line number on malformed input.
std::vector<TrajectoryTrack> read_tracks(std::istream& in, TrackFormat format);
std::vector<TrajectoryTrack> read_tracks(const std::filesystem::path& path);

/// One JSON object per scene:
/// `{"scene_id","t_end","dt","agents":[{"callsign","wtc","window":[[lat,lon,alt]...],"remaining_s"}]}`
std::string scene_to_json(const Scene& scene);
Scene scene_from_json(const std::string& line);
void write_scenes(const std::filesystem::path& path, const std::vector<Scene>& scenes);
std::vector<Scene> read_scenes(const std::filesystem::path& path);

}  // namespace ltp::geo
