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

#include <cstdint>
#include <string>
#include <vector>

#include "ltp/synth/airspace.hpp"

namespace ltp::synth {

struct GeneratedFlight {
  geo::TrajectoryTrack track;
  std::string entry_fix;
  /// Time the flight crosses the boundary ring.
  double entry_time = 0.0;
  double merge_time = 0.0;
  /// Equals track.t_last().
  double landing_time = 0.0;
  /// Total path-stretch delay applied inside the ring, seconds.
  double delay_s = 0.0;
  /// Part of the delay absorbed before the ring when a dog-leg would leave
  /// the ring.
  double pre_ring_delay_s = 0.0;
};

struct Corpus {
  std::vector<GeneratedFlight> flights;
  bool saturated = false;
  std::vector<std::string> warnings;

  std::vector<geo::TrajectoryTrack> tracks() const;
};

/// Seeded arrival stream: Poisson ring crossings, entry fix -> merge fix ->
/// final approach at category speeds. Flights are sequenced first come
/// first served at the merge fix; a flight that would arrive closer than
/// the required separation behind its leader flies a triangular dog-leg
/// sized to absorb the shortfall. Deterministic for a given seed.
Corpus generate_corpus(const AirspaceConfig& cfg, int n_flights, double arrivals_per_hour,
                       std::uint64_t seed);

/// Mean required separation under the configured traffic mix, seconds.
double expected_separation_s(const AirspaceConfig& cfg);

struct SeparationViolation {
  std::string leader;
  std::string follower;
  double gap_s = 0.0;
  double required_s = 0.0;
};

struct LandingRecord {
  std::string callsign;
  geo::Wtc wtc = geo::Wtc::Medium;
  double landing_time = 0.0;
};

/// Consecutive landings closer than sep[leader][follower] - tolerance.
std::vector<SeparationViolation> check_separation(std::vector<LandingRecord> landings,
                                                  const SepMatrix& sep, double tolerance_s = 1.0);
std::vector<SeparationViolation> check_separation(const Corpus& corpus, const SepMatrix& sep,
                                                  double tolerance_s = 1.0);

}  // namespace ltp::synth
