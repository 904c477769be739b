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

#include "ltp/geo/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ltp/error.hpp"

namespace ltp::geo {
namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double parse_num(std::string_view s, std::size_t line) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError("line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t c = line.find(',', pos);
    out.push_back(line.substr(pos, c == std::string_view::npos ? std::string_view::npos : c - pos));
    if (c == std::string_view::npos) break;
    pos = c + 1;
  }
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

}  // namespace

TrackFormat track_format_for(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return TrackFormat::Csv;
  if (ext == ".jsonl" || ext == ".ndjson" || ext == ".json") return TrackFormat::JsonLines;
  throw ValidationError("cannot infer track format from '" + path.string() +
                        "' (use .csv or .jsonl)");
}

void write_tracks(std::ostream& out, const std::vector<TrajectoryTrack>& tracks,
                  TrackFormat format) {
  if (format == TrackFormat::Csv) {
    out << "callsign,wtc,t,lat,lon,alt\n";
    for (const auto& tr : tracks) {
      for (const auto& p : tr.points) {
        out << tr.callsign << ',' << wtc_code(tr.wtc) << ',' << num(p.t) << ',' << num(p.lat)
            << ',' << num(p.lon) << ',' << num(p.alt) << '\n';
      }
    }
    return;
  }
  for (const auto& tr : tracks) {
    out << "{\"callsign\":" << json(tr.callsign).dump() << ",\"wtc\":\"" << wtc_code(tr.wtc)
        << "\",\"points\":[";
    for (std::size_t i = 0; i < tr.points.size(); ++i) {
      const auto& p = tr.points[i];
      if (i) out << ',';
      out << '[' << num(p.t) << ',' << num(p.lat) << ',' << num(p.lon) << ',' << num(p.alt) << ']';
    }
    out << "]}\n";
  }
}

void write_tracks(const std::filesystem::path& path, const std::vector<TrajectoryTrack>& tracks) {
  auto out = open_out(path);
  write_tracks(out, tracks, track_format_for(path));
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<TrajectoryTrack> read_tracks(std::istream& in, TrackFormat format) {
  std::vector<TrajectoryTrack> tracks;
  std::string line;
  std::size_t lineno = 0;
  if (format == TrackFormat::Csv) {
    std::map<std::string, std::size_t> index;
    if (!std::getline(in, line)) return tracks;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "callsign,wtc,t,lat,lon,alt") {
      throw ValidationError("line 1: expected header callsign,wtc,t,lat,lon,alt");
    }
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto f = split_csv(line);
      if (f.size() != 6) {
        throw ValidationError("line " + std::to_string(lineno) + ": expected 6 fields");
      }
      const std::string cs(f[0]);
      auto it = index.find(cs);
      if (it == index.end()) {
        it = index.emplace(cs, tracks.size()).first;
        tracks.push_back({cs, parse_wtc(f[1]), {}});
      }
      tracks[it->second].points.push_back({parse_num(f[2], lineno), parse_num(f[3], lineno),
                                           parse_num(f[4], lineno), parse_num(f[5], lineno)});
    }
  } else {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        const json j = json::parse(line);
        TrajectoryTrack tr;
        tr.callsign = j.at("callsign").get<std::string>();
        tr.wtc = parse_wtc(j.at("wtc").get<std::string>());
        for (const auto& p : j.at("points")) {
          if (p.size() != 4) throw ValidationError("point needs [t,lat,lon,alt]");
          tr.points.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>(),
                               p[3].get<double>()});
        }
        tracks.push_back(std::move(tr));
      } catch (const json::exception& e) {
        throw ValidationError("line " + std::to_string(lineno) + ": " + e.what());
      }
    }
  }
  for (const auto& tr : tracks) validate(tr);
  return tracks;
}

std::vector<TrajectoryTrack> read_tracks(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_tracks(in, track_format_for(path));
}

std::string scene_to_json(const Scene& scene) {
  std::ostringstream out;
  out << "{\"scene_id\":" << json(scene.scene_id).dump() << ",\"t_end\":" << num(scene.t_end)
      << ",\"dt\":" << num(scene.dt) << ",\"agents\":[";
  for (std::size_t i = 0; i < scene.agents.size(); ++i) {
    const auto& a = scene.agents[i];
    if (i) out << ',';
    out << "{\"callsign\":" << json(a.callsign).dump() << ",\"wtc\":\"" << wtc_code(a.wtc)
        << "\",\"window\":[";
    for (std::size_t k = 0; k < a.window.size(); ++k) {
      if (k) out << ',';
      out << '[' << num(a.window[k][0]) << ',' << num(a.window[k][1]) << ','
          << num(a.window[k][2]) << ']';
    }
    out << "],\"remaining_s\":" << num(a.remaining_s) << '}';
  }
  out << "]}";
  return out.str();
}

Scene scene_from_json(const std::string& line) {
  try {
    const json j = json::parse(line);
    Scene s;
    s.scene_id = j.at("scene_id").get<std::string>();
    s.t_end = j.at("t_end").get<double>();
    s.dt = j.at("dt").get<double>();
    for (const auto& ja : j.at("agents")) {
      SceneAgent a;
      a.callsign = ja.at("callsign").get<std::string>();
      a.wtc = parse_wtc(ja.at("wtc").get<std::string>());
      for (const auto& row : ja.at("window")) {
        if (row.size() != kChannels) throw ValidationError("window rows need [lat,lon,alt]");
        a.window.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
      }
      a.remaining_s = ja.at("remaining_s").get<double>();
      s.agents.push_back(std::move(a));
    }
    return s;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scene json: ") + e.what());
  }
}

void write_scenes(const std::filesystem::path& path, const std::vector<Scene>& scenes) {
  auto out = open_out(path);
  for (const auto& s : scenes) out << scene_to_json(s) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<Scene> read_scenes(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<Scene> scenes;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      scenes.push_back(scene_from_json(line));
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return scenes;
}

}  // namespace ltp::geo
