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

#include "ltp/geo/geodesy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ltp/error.hpp"

namespace ltp::geo {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr double kRadiusNm = kEarthRadiusKm / kKmPerNm;

void check(LatLon p) {
  if (!(p.lat >= -90.0 && p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0)) {
    throw ValidationError("coordinate out of range: (" + std::to_string(p.lat) + ", " +
                          std::to_string(p.lon) + ")");
  }
}

TrackPoint lerp(const TrackPoint& a, const TrackPoint& b, double f) {
  return {a.t + f * (b.t - a.t), a.lat + f * (b.lat - a.lat), a.lon + f * (b.lon - a.lon),
          a.alt + f * (b.alt - a.alt)};
}

}  // namespace

double great_circle_nm(LatLon a, LatLon b) {
  check(a);
  check(b);
  const double dlat = (b.lat - a.lat) * kDeg;
  const double dlon = (b.lon - a.lon) * kDeg;
  const double s1 = std::sin(dlat / 2);
  const double s2 = std::sin(dlon / 2);
  const double h = s1 * s1 + std::cos(a.lat * kDeg) * std::cos(b.lat * kDeg) * s2 * s2;
  return 2.0 * kRadiusNm * std::asin(std::min(1.0, std::sqrt(h)));
}

LatLon destination_point(LatLon origin, double bearing_deg, double distance_nm) {
  const double d = distance_nm / kRadiusNm;
  const double th = bearing_deg * kDeg;
  const double la1 = origin.lat * kDeg;
  const double lo1 = origin.lon * kDeg;
  const double la2 = std::asin(std::sin(la1) * std::cos(d) + std::cos(la1) * std::sin(d) * std::cos(th));
  const double lo2 = lo1 + std::atan2(std::sin(th) * std::sin(d) * std::cos(la1),
                                      std::cos(d) - std::sin(la1) * std::sin(la2));
  double lon = lo2 / kDeg;
  lon = std::fmod(lon + 540.0, 360.0) - 180.0;
  return {la2 / kDeg, lon};
}

double initial_bearing_deg(LatLon a, LatLon b) {
  const double la1 = a.lat * kDeg, la2 = b.lat * kDeg;
  const double dlon = (b.lon - a.lon) * kDeg;
  const double y = std::sin(dlon) * std::cos(la2);
  const double x = std::cos(la1) * std::sin(la2) - std::sin(la1) * std::cos(la2) * std::cos(dlon);
  const double deg = std::atan2(y, x) / kDeg;
  return std::fmod(deg + 360.0, 360.0);
}

std::optional<TrajectoryTrack> truncate_at_boundary(const TrajectoryTrack& track, LatLon center,
                                                    double radius_nm) {
  if (track.points.empty()) return std::nullopt;
  auto dist = [&](const TrackPoint& p) { return great_circle_nm({p.lat, p.lon}, center); };
  const std::size_t n = track.points.size();
  if (dist(track.points.back()) > radius_nm) return std::nullopt;

  // Last sample outside the circle; everything after it stays.
  std::ptrdiff_t last_out = -1;
  for (std::size_t i = 0; i < n; ++i)
    if (dist(track.points[i]) > radius_nm) last_out = static_cast<std::ptrdiff_t>(i);
  if (last_out < 0) return track;

  const TrackPoint& a = track.points[last_out];
  const TrackPoint& b = track.points[last_out + 1];
  // Solve dist(lerp(a, b, f)) == radius for f by bisection on the
  // time-linear segment; da > radius >= db brackets the root.
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (dist(lerp(a, b, mid)) > radius_nm) lo = mid;
    else hi = mid;
  }
  TrajectoryTrack out;
  out.callsign = track.callsign;
  out.wtc = track.wtc;
  TrackPoint entry = lerp(a, b, hi);
  if (entry.t < b.t) out.points.push_back(entry);
  out.points.insert(out.points.end(), track.points.begin() + last_out + 1, track.points.end());
  return out;
}

}  // namespace ltp::geo
