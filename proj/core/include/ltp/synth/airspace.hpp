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
#include <filesystem>
#include <string>
#include <vector>

#include "ltp/geo/geodesy.hpp"
#include "ltp/geo/track.hpp"

namespace ltp::synth {

using SepMatrix = std::array<std::array<double, geo::kWtcCount>, geo::kWtcCount>;

struct EntryFix {
  std::string name;
  /// Bearing from the airport to the fix on the boundary ring, degrees.
  double bearing_deg = 0.0;
  /// Relative share of traffic entering here.
  double weight = 1.0;
};

struct NoiseConfig {
  /// Per-flight multiplicative ground-speed jitter (std dev, fraction).
  double speed_frac = 0.03;
  /// Per-flight jitter of the ring crossing bearing, degrees.
  double bearing_deg = 1.0;
  /// Per-sample horizontal position noise, nautical miles.
  double position_nm = 0.02;
  /// Per-sample altitude noise, feet.
  double altitude_ft = 10.0;
  /// Surveillance reports arrive at uniform random intervals in this range.
  double report_dt_min_s = 4.0;
  double report_dt_max_s = 8.0;
};

/// Terminal airspace used by the traffic generator: entry fixes on a ring,
/// one merge fix, a straight final to the airport reference point, and the
/// leader x follower time separation enforced at the merge.
struct AirspaceConfig {
  geo::LatLon arp{37.4602, 126.4407};
  double ring_nm = 70.0;
  /// Tracks begin this far outside the ring so boundary truncation has work to do.
  double pre_ring_nm = 5.0;
  std::vector<EntryFix> entry_fixes{
      {"REBIT", 30.0, 1.0}, {"OLMEN", 110.0, 1.0}, {"GUKDO", 200.0, 1.0}, {"KARBU", 290.0, 1.0}};
  double merge_bearing_deg = 150.0;
  double merge_distance_nm = 15.0;
  /// Nominal ground speed from the ring to the merge fix, per category.
  std::array<double, geo::kWtcCount> speeds_kt{180.0, 240.0, 250.0, 260.0};
  /// Common speed from the merge fix to touchdown.
  double final_speed_kt = 180.0;
  /// sep_matrix_s[leader][follower], seconds.
  SepMatrix sep_matrix_s = default_sep_matrix();
  /// Traffic mix per category (relative weights).
  std::array<double, geo::kWtcCount> wtc_mix{0.05, 0.60, 0.33, 0.02};
  double ring_altitude_ft = 18000.0;
  NoiseConfig noise;
  /// Probability that an aircraft needing no spacing delay still gets a vector.
  double vector_prob = 0.1;
  double vector_delay_min_s = 20.0;
  double vector_delay_max_s = 60.0;
  /// Epoch seconds of the first possible ring crossing.
  double start_time = 1.7e9;

  static SepMatrix default_sep_matrix();
};

/// Throws ValidationError listing the first violated invariant.
void validate(const AirspaceConfig& cfg);

/// Reads a TOML (.toml) or JSON (.json) file; missing keys keep defaults.
AirspaceConfig load_airspace_config(const std::filesystem::path& path);
std::string airspace_config_to_json(const AirspaceConfig& cfg);

}  // namespace ltp::synth
