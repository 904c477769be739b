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

#include "ltp/geo/track.hpp"

#include <cmath>

#include "ltp/error.hpp"

namespace ltp::geo {

Wtc parse_wtc(std::string_view s) {
  if (s == "L" || s == "Light" || s == "light") return Wtc::Light;
  if (s == "M" || s == "Medium" || s == "medium") return Wtc::Medium;
  if (s == "H" || s == "Heavy" || s == "heavy") return Wtc::Heavy;
  if (s == "J" || s == "S" || s == "Super" || s == "super") return Wtc::Super;
  throw ValidationError("unknown wake turbulence category '" + std::string(s) + "'");
}

std::string_view wtc_code(Wtc w) {
  switch (w) {
    case Wtc::Light: return "L";
    case Wtc::Medium: return "M";
    case Wtc::Heavy: return "H";
    case Wtc::Super: return "J";
  }
  return "?";
}

void validate(const TrajectoryTrack& track, std::size_t min_points) {
  const std::string who = "track '" + track.callsign + "': ";
  if (track.points.size() < min_points) {
    throw ValidationError(who + "needs at least " + std::to_string(min_points) + " points");
  }
  for (std::size_t i = 0; i < track.points.size(); ++i) {
    const TrackPoint& p = track.points[i];
    if (!std::isfinite(p.t) || !std::isfinite(p.lat) || !std::isfinite(p.lon) ||
        !std::isfinite(p.alt)) {
      throw ValidationError(who + "non-finite value at point " + std::to_string(i));
    }
    if (p.lat < -90.0 || p.lat > 90.0) throw ValidationError(who + "latitude out of range");
    if (p.lon < -180.0 || p.lon > 180.0) throw ValidationError(who + "longitude out of range");
    if (p.alt < 0.0) throw ValidationError(who + "negative altitude");
    if (i > 0 && !(p.t > track.points[i - 1].t)) {
      throw ValidationError(who + "timestamps not strictly increasing at point " +
                            std::to_string(i));
    }
  }
}

}  // namespace ltp::geo
