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

#include "ltp/synth/airspace.hpp"

#include <set>

#include "../config_file.hpp"
#include "ltp/error.hpp"

namespace ltp::synth {

using nlohmann::json;
using detail::read_opt;

void validate(const AirspaceConfig& c) {
  auto fail = [](const std::string& m) { throw ValidationError("airspace config: " + m); };
  if (!(c.ring_nm > 0)) fail("ring_nm must be positive");
  if (!(c.pre_ring_nm > 0)) fail("pre_ring_nm must be positive");
  if (c.entry_fixes.size() < 2) fail("at least two entry fixes required");
  std::set<std::string> names;
  std::set<double> bearings;
  for (const auto& f : c.entry_fixes) {
    if (!names.insert(f.name).second) fail("duplicate entry fix " + f.name);
    if (!bearings.insert(f.bearing_deg).second) fail("entry fixes must be distinct");
    if (!(f.weight > 0)) fail("entry fix weights must be positive");
  }
  if (!(c.merge_distance_nm > 0 && c.merge_distance_nm < c.ring_nm)) {
    fail("merge fix must lie strictly inside the ring");
  }
  for (double s : c.speeds_kt)
    if (!(s > 0)) fail("speeds must be positive");
  if (!(c.final_speed_kt > 0)) fail("final speed must be positive");
  for (const auto& row : c.sep_matrix_s)
    for (double s : row)
      if (!(s > 0)) fail("separations must be positive");
  double mix = 0;
  for (double w : c.wtc_mix) {
    if (w < 0) fail("traffic mix weights must be non-negative");
    mix += w;
  }
  if (!(mix > 0)) fail("traffic mix must not be all zero");
  if (c.vector_prob < 0 || c.vector_prob > 1) fail("vector_prob must be in [0,1]");
  if (c.vector_delay_min_s < 0 || c.vector_delay_max_s < c.vector_delay_min_s) {
    fail("bad vectoring delay range");
  }
  if (c.noise.report_dt_min_s <= 0 || c.noise.report_dt_max_s < c.noise.report_dt_min_s) {
    fail("bad report interval range");
  }
  if (c.noise.speed_frac < 0 || c.noise.bearing_deg < 0 || c.noise.position_nm < 0 ||
      c.noise.altitude_ft < 0) {
    fail("noise levels must be non-negative");
  }
}

AirspaceConfig load_airspace_config(const std::filesystem::path& path) {
  const json j = detail::load_config_document(path);
  AirspaceConfig c;
  try {
    if (auto it = j.find("arp"); it != j.end()) {
      read_opt(*it, "lat", c.arp.lat);
      read_opt(*it, "lon", c.arp.lon);
    }
    read_opt(j, "ring_nm", c.ring_nm);
    read_opt(j, "pre_ring_nm", c.pre_ring_nm);
    if (auto it = j.find("entry_fixes"); it != j.end()) {
      c.entry_fixes.clear();
      for (const auto& f : *it) {
        EntryFix fix;
        fix.name = f.at("name").get<std::string>();
        fix.bearing_deg = f.at("bearing_deg").get<double>();
        read_opt(f, "weight", fix.weight);
        c.entry_fixes.push_back(fix);
      }
    }
    if (auto it = j.find("merge_fix"); it != j.end()) {
      read_opt(*it, "bearing_deg", c.merge_bearing_deg);
      read_opt(*it, "distance_nm", c.merge_distance_nm);
    }
    read_opt(j, "speeds_kt", c.speeds_kt);
    read_opt(j, "final_speed_kt", c.final_speed_kt);
    read_opt(j, "sep_matrix_s", c.sep_matrix_s);
    read_opt(j, "wtc_mix", c.wtc_mix);
    read_opt(j, "ring_altitude_ft", c.ring_altitude_ft);
    if (auto it = j.find("noise"); it != j.end()) {
      read_opt(*it, "speed_frac", c.noise.speed_frac);
      read_opt(*it, "bearing_deg", c.noise.bearing_deg);
      read_opt(*it, "position_nm", c.noise.position_nm);
      read_opt(*it, "altitude_ft", c.noise.altitude_ft);
      read_opt(*it, "report_dt_min_s", c.noise.report_dt_min_s);
      read_opt(*it, "report_dt_max_s", c.noise.report_dt_max_s);
    }
    read_opt(j, "vector_prob", c.vector_prob);
    read_opt(j, "vector_delay_min_s", c.vector_delay_min_s);
    read_opt(j, "vector_delay_max_s", c.vector_delay_max_s);
    read_opt(j, "start_time", c.start_time);
  } catch (const json::exception& e) {
    throw ValidationError("airspace config " + path.string() + ": " + e.what());
  }
  validate(c);
  return c;
}

std::string airspace_config_to_json(const AirspaceConfig& c) {
  json fixes = json::array();
  for (const auto& f : c.entry_fixes) {
    fixes.push_back({{"name", f.name}, {"bearing_deg", f.bearing_deg}, {"weight", f.weight}});
  }
  const json j = {
      {"arp", {{"lat", c.arp.lat}, {"lon", c.arp.lon}}},
      {"ring_nm", c.ring_nm},
      {"pre_ring_nm", c.pre_ring_nm},
      {"entry_fixes", fixes},
      {"merge_fix", {{"bearing_deg", c.merge_bearing_deg}, {"distance_nm", c.merge_distance_nm}}},
      {"speeds_kt", c.speeds_kt},
      {"final_speed_kt", c.final_speed_kt},
      {"sep_matrix_s", c.sep_matrix_s},
      {"wtc_mix", c.wtc_mix},
      {"ring_altitude_ft", c.ring_altitude_ft},
      {"noise",
       {{"speed_frac", c.noise.speed_frac},
        {"bearing_deg", c.noise.bearing_deg},
        {"position_nm", c.noise.position_nm},
        {"altitude_ft", c.noise.altitude_ft},
        {"report_dt_min_s", c.noise.report_dt_min_s},
        {"report_dt_max_s", c.noise.report_dt_max_s}}},
      {"vector_prob", c.vector_prob},
      {"vector_delay_min_s", c.vector_delay_min_s},
      {"vector_delay_max_s", c.vector_delay_max_s},
      {"start_time", c.start_time},
  };
  return j.dump(2);
}

}  // namespace ltp::synth
