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
#include <string>
#include <string_view>
#include <vector>

namespace ltp::geo {

/// Wake turbulence category.
enum class Wtc { Light = 0, Medium = 1, Heavy = 2, Super = 3 };
inline constexpr int kWtcCount = 4;

/// Accepts L/M/H/J (ICAO letters), S, and the full English names.
Wtc parse_wtc(std::string_view s);
/// ICAO letter: L, M, H or J.
std::string_view wtc_code(Wtc w);

struct TrackPoint {
  double t = 0.0;    // seconds since epoch
  double lat = 0.0;  // degrees
  double lon = 0.0;  // degrees
  double alt = 0.0;  // feet
};

struct TrajectoryTrack {
  std::string callsign;
  Wtc wtc = Wtc::Medium;
  std::vector<TrackPoint> points;

  double t_first() const { return points.front().t; }
  double t_last() const { return points.back().t; }
};

/// Throws ValidationError unless timestamps strictly increase, coordinates
/// are in range, altitude is non-negative and at least `min_points` exist.
void validate(const TrajectoryTrack& track, std::size_t min_points = 2);

}  // namespace ltp::geo
