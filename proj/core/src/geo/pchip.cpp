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

#include "ltp/geo/pchip.hpp"

#include <algorithm>
#include <cmath>

#include "ltp/error.hpp"

namespace ltp::geo {
namespace {

int sign(double v) { return (v > 0) - (v < 0); }

double end_slope(double h0, double h1, double del0, double del1) {
  double d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
  if (sign(d) != sign(del0)) {
    d = 0.0;
  } else if (sign(del0) != sign(del1) && std::abs(d) > std::abs(3.0 * del0)) {
    d = 3.0 * del0;
  }
  return d;
}

}  // namespace

Pchip::Pchip(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()), d_(x.size(), 0.0) {
  const std::size_t n = x_.size();
  if (n != y_.size()) throw ValidationError("pchip: x and y sizes differ");
  if (n < 2) throw ValidationError("pchip: at least two knots required");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) throw ValidationError("pchip: knots must strictly increase");
  }
  std::vector<double> h(n - 1), del(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    del[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  if (n == 2) {
    d_[0] = d_[1] = del[0];
    return;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (sign(del[k - 1]) * sign(del[k]) <= 0) {
      d_[k] = 0.0;
    } else {
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      d_[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
    }
  }
  d_[0] = end_slope(h[0], h[1], del[0], del[1]);
  d_[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
}

double Pchip::operator()(double x) const {
  const std::size_t n = x_.size();
  std::size_t i = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin());
  i = std::clamp<std::size_t>(i, 1, n - 1) - 1;
  const double h = x_[i + 1] - x_[i];
  const double s = (x - x_[i]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

TrajectoryTrack pchip_resample(const TrajectoryTrack& track, double dt, double origin) {
  validate(track);
  if (!(dt > 0)) throw ValidationError("pchip_resample: dt must be positive");
  const std::size_t n = track.points.size();
  std::vector<double> t(n), lat(n), lon(n), alt(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = track.points[i].t;
    lat[i] = track.points[i].lat;
    lon[i] = track.points[i].lon;
    alt[i] = track.points[i].alt;
  }
  const Pchip f_lat(t, lat), f_lon(t, lon), f_alt(t, alt);

  TrajectoryTrack out;
  out.callsign = track.callsign;
  out.wtc = track.wtc;
  const auto k0 = static_cast<long long>(std::ceil((t.front() - origin) / dt));
  const auto k1 = static_cast<long long>(std::floor((t.back() - origin) / dt));
  for (long long k = k0; k <= k1; ++k) {
    const double tk = origin + static_cast<double>(k) * dt;
    out.points.push_back({tk, f_lat(tk), f_lon(tk), std::max(0.0, f_alt(tk))});
  }
  return out;
}

}  // namespace ltp::geo
