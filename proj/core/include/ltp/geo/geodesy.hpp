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

#include <optional>

#include "ltp/geo/track.hpp"

namespace ltp::geo {

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kKmPerNm = 1.852;

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;
};

/// Haversine distance in nautical miles. Throws ValidationError for
/// out-of-range coordinates.
double great_circle_nm(LatLon a, LatLon b);

/// Point reached by travelling `distance_nm` from `origin` on the initial
/// great-circle bearing `bearing_deg` (clockwise from north).
LatLon destination_point(LatLon origin, double bearing_deg, double distance_nm);

/// Initial great-circle bearing from `a` to `b`, degrees in [0, 360).
double initial_bearing_deg(LatLon a, LatLon b);

/// Drops the part of the track before its final entry into the circle of
/// `radius_nm` around `center`. The first retained point is the boundary
/// crossing, placed by interpolating linearly in time between the
/// bracketing samples. Returns nullopt when the track does not end inside
/// the circle.
std::optional<TrajectoryTrack> truncate_at_boundary(const TrajectoryTrack& track, LatLon center,
                                                    double radius_nm = 70.0);

}  // namespace ltp::geo
