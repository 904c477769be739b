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

#include <span>
#include <vector>

#include "ltp/geo/track.hpp"

namespace ltp::geo {

/// Monotone piecewise cubic Hermite interpolant (Fritsch-Carlson). Interior
/// slopes are weighted harmonic means of neighbouring secants (zero at
/// local extrema); end slopes use the one-sided three-point formula clamped
/// to preserve shape. Two knots degenerate to linear interpolation.
class Pchip {
 public:
  /// Throws ValidationError unless x strictly increases and sizes match
  /// with at least two knots.
  Pchip(std::span<const double> x, std::span<const double> y);

  /// Evaluates inside [x.front(), x.back()]; outside, the end cubics are
  /// extended.
  double operator()(double x) const;
  std::span<const double> slopes() const { return d_; }

 private:
  std::vector<double> x_, y_, d_;
};

/// Resamples every channel of the track onto the grid
/// {origin + k*dt} that falls inside [t_first, t_last]. With the default
/// origin 0 all tracks share one absolute time grid.
TrajectoryTrack pchip_resample(const TrajectoryTrack& track, double dt = 6.0, double origin = 0.0);

}  // namespace ltp::geo
