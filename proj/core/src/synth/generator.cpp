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

#include "ltp/synth/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ltp/error.hpp"
#include "ltp/rng.hpp"

namespace ltp::synth {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct Vec2 {
  double x = 0, y = 0;  // east, north in nm
};
Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
double norm(Vec2 a) { return std::hypot(a.x, a.y); }
Vec2 polar(double bearing_deg, double r) {
  return {r * std::sin(bearing_deg * kDeg), r * std::cos(bearing_deg * kDeg)};
}

/// Polyline flown at piecewise-constant speed.
struct Leg {
  Vec2 from, to;
  double speed_kt;
  double t_start;
  double duration() const { return norm(to - from) / speed_kt * 3600.0; }
};

template <typename T>
std::size_t weighted_pick(Rng& rng, const T& weights) {
  double total = 0;
  for (double w : weights) total += w;
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    u -= weights[i];
    if (u < 0) return i;
  }
  return weights.size() - 1;
}

constexpr const char* kAirlines[] = {"KAL", "AAR", "JNA", "TWB", "ACA", "SIA",
                                     "AHK", "CPA", "JAL", "UAL", "DAL", "CES"};

struct Plan {
  std::size_t fix = 0;
  geo::Wtc wtc = geo::Wtc::Medium;
  double speed_kt = 0;
  double bearing_deg = 0;
  double entry_time = 0;
  double nominal_merge = 0;
  double merge_time = 0;
  double delay = 0;
  std::string callsign;
};

}  // namespace

SepMatrix AirspaceConfig::default_sep_matrix() {
  SepMatrix m{};
  for (auto& row : m) row.fill(90.0);
  m[static_cast<int>(geo::Wtc::Heavy)][static_cast<int>(geo::Wtc::Medium)] = 120.0;
  m[static_cast<int>(geo::Wtc::Super)][static_cast<int>(geo::Wtc::Light)] = 180.0;
  return m;
}

std::vector<geo::TrajectoryTrack> Corpus::tracks() const {
  std::vector<geo::TrajectoryTrack> out;
  out.reserve(flights.size());
  for (const auto& f : flights) out.push_back(f.track);
  return out;
}

double expected_separation_s(const AirspaceConfig& cfg) {
  double total = 0, acc = 0;
  for (int l = 0; l < geo::kWtcCount; ++l)
    for (int f = 0; f < geo::kWtcCount; ++f) {
      const double w = cfg.wtc_mix[l] * cfg.wtc_mix[f];
      acc += w * cfg.sep_matrix_s[l][f];
      total += w;
    }
  return acc / total;
}

Corpus generate_corpus(const AirspaceConfig& cfg, int n_flights, double arrivals_per_hour,
                       std::uint64_t seed) {
  validate(cfg);
  if (n_flights <= 0) throw ValidationError("n_flights must be positive");
  if (!(arrivals_per_hour > 0)) throw ValidationError("arrival rate must be positive");

  Corpus corpus;
  const double load = expected_separation_s(cfg) * arrivals_per_hour / 3600.0;
  if (load > 1.0) {
    corpus.saturated = true;
    corpus.warnings.push_back("arrival rate " + std::to_string(arrivals_per_hour) +
                              "/hr exceeds merge capacity (load factor " + std::to_string(load) +
                              "); expect queuing delays");
  }

  Rng rng = Rng::substream(seed, "traffic");
  const Vec2 merge = polar(cfg.merge_bearing_deg, cfg.merge_distance_nm);
  std::vector<double> fix_weights;
  for (const auto& f : cfg.entry_fixes) fix_weights.push_back(f.weight);

  // Ring crossings and per-flight draws, in entry order.
  std::vector<Plan> plans(static_cast<std::size_t>(n_flights));
  double t = cfg.start_time;
  for (int i = 0; i < n_flights; ++i) {
    Plan& p = plans[i];
    t += rng.exponential(arrivals_per_hour / 3600.0);
    p.entry_time = t;
    p.fix = weighted_pick(rng, fix_weights);
    p.wtc = static_cast<geo::Wtc>(weighted_pick(rng, cfg.wtc_mix));
    const double jitter = std::clamp(rng.normal(0.0, cfg.noise.speed_frac), -0.2, 0.2);
    p.speed_kt = cfg.speeds_kt[static_cast<int>(p.wtc)] * (1.0 + jitter);
    p.bearing_deg = cfg.entry_fixes[p.fix].bearing_deg + rng.normal(0.0, cfg.noise.bearing_deg);
    const Vec2 entry = polar(p.bearing_deg, cfg.ring_nm);
    p.nominal_merge = p.entry_time + norm(merge - entry) / p.speed_kt * 3600.0;
    p.callsign = std::string(kAirlines[rng.below(std::size(kAirlines))]) + std::to_string(100 + i);
  }

  // First come first served at the merge fix.
  std::vector<std::size_t> order(plans.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return plans[a].nominal_merge < plans[b].nominal_merge;
  });
  for (std::size_t k = 0; k < order.size(); ++k) {
    Plan& p = plans[order[k]];
    double earliest = p.nominal_merge;
    if (k > 0) {
      const Plan& lead = plans[order[k - 1]];
      earliest = std::max(earliest, lead.merge_time + cfg.sep_matrix_s[static_cast<int>(lead.wtc)]
                                                                      [static_cast<int>(p.wtc)]);
    }
    p.delay = earliest - p.nominal_merge;
    if (p.delay <= 0.0 && rng.bernoulli(cfg.vector_prob)) {
      p.delay = rng.uniform(cfg.vector_delay_min_s, cfg.vector_delay_max_s);
    }
    p.delay = std::max(0.0, p.delay);
    p.merge_time = p.nominal_merge + p.delay;
  }

  Rng sample_rng = Rng::substream(seed, "reports");
  corpus.flights.reserve(plans.size());
  for (const Plan& p : plans) {
    const Vec2 entry = polar(p.bearing_deg, cfg.ring_nm);
    const Vec2 start = polar(p.bearing_deg, cfg.ring_nm + cfg.pre_ring_nm);
    const double leg1 = norm(merge - entry);

    // Dog-leg apex offset from the leg midpoint; capped so the apex stays
    // inside the ring, with the remainder absorbed before the ring.
    double extra_nm = p.delay * p.speed_kt / 3600.0;
    const Vec2 mid = 0.5 * (entry + merge);
    const Vec2 dir = (1.0 / leg1) * (merge - entry);
    const Vec2 left{-dir.y, dir.x};
    const Vec2 side = norm(mid + left) < norm(mid - left) ? left : -1.0 * left;
    const double max_apex = std::max(0.0, cfg.ring_nm - 2.0 - norm(mid));
    double h = std::sqrt(std::max(0.0, std::pow((leg1 + extra_nm) / 2, 2) - std::pow(leg1 / 2, 2)));
    double pre_delay = 0.0;
    if (h > max_apex) {
      h = max_apex;
      const double absorbed = 2.0 * std::hypot(leg1 / 2, h) - leg1;
      pre_delay = (extra_nm - absorbed) / p.speed_kt * 3600.0;
      extra_nm = absorbed;
    }

    // Any pre-ring delay postpones the ring crossing itself.
    std::vector<Leg> legs;
    const double t_ring = p.entry_time + pre_delay;
    const double t_start = p.entry_time - cfg.pre_ring_nm / p.speed_kt * 3600.0;
    legs.push_back({start, entry, cfg.pre_ring_nm / ((t_ring - t_start) / 3600.0), t_start});
    if (h > 1e-9) {
      const Vec2 apex = mid + h * side;
      legs.push_back({entry, apex, p.speed_kt, t_ring});
      legs.push_back({apex, merge, p.speed_kt, t_ring + legs.back().duration()});
    } else {
      legs.push_back({entry, merge, p.speed_kt, t_ring});
    }
    legs.push_back({merge, Vec2{}, cfg.final_speed_kt, p.merge_time});
    const double t_land = p.merge_time + cfg.merge_distance_nm / cfg.final_speed_kt * 3600.0;

    // Path length flown inside the ring, for the descent profile.
    double inside_total = 0;
    for (std::size_t i = 1; i < legs.size(); ++i) inside_total += norm(legs[i].to - legs[i].from);

    auto state_at = [&](double tt, double& remaining_inside) -> Vec2 {
      std::size_t i = legs.size() - 1;
      while (i > 0 && tt < legs[i].t_start) --i;
      const Leg& lg = legs[i];
      const double dur = lg.duration();
      const double f = dur > 0 ? std::clamp((tt - lg.t_start) / dur, 0.0, 1.0) : 1.0;
      const Vec2 pos = lg.from + f * (lg.to - lg.from);
      remaining_inside = 0;
      if (i == 0) {
        remaining_inside = inside_total;
      } else {
        remaining_inside = (1.0 - f) * norm(lg.to - lg.from);
        for (std::size_t j = i + 1; j < legs.size(); ++j) remaining_inside += norm(legs[j].to - legs[j].from);
      }
      return pos;
    };

    GeneratedFlight flight;
    flight.entry_fix = cfg.entry_fixes[p.fix].name;
    flight.entry_time = t_ring;
    flight.merge_time = p.merge_time;
    flight.landing_time = t_land;
    flight.delay_s = p.delay;
    flight.pre_ring_delay_s = pre_delay;
    flight.track.callsign = p.callsign;
    flight.track.wtc = p.wtc;

    double tt = t_start;
    while (true) {
      const bool last = tt >= t_land;
      if (last) tt = t_land;
      double rem = 0;
      Vec2 pos = state_at(tt, rem);
      double alt = cfg.ring_altitude_ft * rem / inside_total;
      if (!last) {
        pos = pos + Vec2{sample_rng.normal(0.0, cfg.noise.position_nm),
                         sample_rng.normal(0.0, cfg.noise.position_nm)};
        alt += sample_rng.normal(0.0, cfg.noise.altitude_ft);
      } else {
        pos = Vec2{};
        alt = 0.0;
      }
      const double dist = norm(pos);
      const geo::LatLon ll =
          dist > 0 ? geo::destination_point(cfg.arp, std::atan2(pos.x, pos.y) / kDeg, dist) : cfg.arp;
      flight.track.points.push_back({tt, ll.lat, ll.lon, std::max(0.0, alt)});
      if (last) break;
      tt += sample_rng.uniform(cfg.noise.report_dt_min_s, cfg.noise.report_dt_max_s);
      // Keep the touchdown report from landing a hair after the previous one.
      if (tt > t_land - 0.5 && tt < t_land) tt = t_land;
    }
    corpus.flights.push_back(std::move(flight));
  }
  return corpus;
}

std::vector<SeparationViolation> check_separation(std::vector<LandingRecord> landings,
                                                  const SepMatrix& sep, double tolerance_s) {
  std::stable_sort(landings.begin(), landings.end(),
                   [](const auto& a, const auto& b) { return a.landing_time < b.landing_time; });
  std::vector<SeparationViolation> out;
  for (std::size_t i = 1; i < landings.size(); ++i) {
    const auto& lead = landings[i - 1];
    const auto& fol = landings[i];
    const double required = sep[static_cast<int>(lead.wtc)][static_cast<int>(fol.wtc)];
    const double gap = fol.landing_time - lead.landing_time;
    if (gap < required - tolerance_s) out.push_back({lead.callsign, fol.callsign, gap, required});
  }
  return out;
}

std::vector<SeparationViolation> check_separation(const Corpus& corpus, const SepMatrix& sep,
                                                  double tolerance_s) {
  std::vector<LandingRecord> recs;
  recs.reserve(corpus.flights.size());
  for (const auto& f : corpus.flights) {
    recs.push_back({f.track.callsign, f.track.wtc, f.track.t_last()});
  }
  return check_separation(std::move(recs), sep, tolerance_s);
}

}  // namespace ltp::synth
