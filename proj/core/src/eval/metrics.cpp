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


#include "ltp/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>

#include "ltp/error.hpp"

namespace ltp::eval {

PointMetrics point_metrics(std::span<const double> y, std::span<const double> yhat,
                           double mape_floor) {
  if (y.empty()) throw ValidationError("point_metrics: no samples");
  if (y.size() != yhat.size()) {
    throw ValidationError("point_metrics: " + std::to_string(y.size()) + " targets vs " +
                          std::to_string(yhat.size()) + " predictions");
  }
  PointMetrics m;
  m.n = y.size();
  double abs_sum = 0.0, sq_sum = 0.0, pct_sum = 0.0;
  std::size_t pct_n = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double e = y[i] - yhat[i];
    abs_sum += std::abs(e);
    sq_sum += e * e;
    if (std::abs(y[i]) >= mape_floor) {
      pct_sum += std::abs(e / y[i]);
      ++pct_n;
    }
  }
  m.mae = abs_sum / static_cast<double>(m.n);
  m.rmse = std::sqrt(sq_sum / static_cast<double>(m.n));
  m.mape = pct_n ? 100.0 * pct_sum / static_cast<double>(pct_n) : 0.0;
  m.mape_excluded = m.n - pct_n;
  return m;
}

Ranking rank_by_time(std::span<const double> times, std::span<const std::string> keys) {
  if (times.size() != keys.size()) throw ValidationError("rank_by_time: misaligned keys");
  std::vector<int> order(times.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (times[a] != times[b]) return times[a] < times[b];
    return keys[a] < keys[b];
  });
  Ranking r;
  r.ranks.resize(times.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    r.ranks[order[pos]] = static_cast<int>(pos) + 1;
    if (pos > 0 && times[order[pos]] == times[order[pos - 1]]) r.ties = true;
  }
  return r;
}

namespace {

void check_permutations(std::span<const int> a, std::span<const int> b, const char* who) {
  if (a.size() != b.size()) throw ValidationError(std::string(who) + ": rank lists differ in length");
  if (a.size() < 2) throw ValidationError(std::string(who) + ": needs at least two items");
  const std::size_t n = a.size();
  for (auto r : {a, b}) {
    std::vector<std::uint8_t> seen(n + 1, 0);
    for (int v : r) {
      if (v < 1 || static_cast<std::size_t>(v) > n || seen[v]) {
        throw ValidationError(std::string(who) + ": ranks are not a permutation of 1..N");
      }
      seen[v] = 1;
    }
  }
}

std::uint64_t count_inversions(std::vector<int>& v, std::vector<int>& buf, std::size_t lo,
                               std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t inv = count_inversions(v, buf, lo, mid) + count_inversions(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[i] <= v[j]) {
      buf[k++] = v[i++];
    } else {
      inv += mid - i;
      buf[k++] = v[j++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return inv;
}

}  // namespace

double spearman_rho(std::span<const int> rank_true, std::span<const int> rank_pred) {
  check_permutations(rank_true, rank_pred, "spearman_rho");
  const auto n = static_cast<std::int64_t>(rank_true.size());
  std::int64_t d = 0;
  for (std::size_t i = 0; i < rank_true.size(); ++i) {
    const std::int64_t diff = rank_true[i] - rank_pred[i];
    d += diff * diff;
  }
  return 1.0 - 6.0 * static_cast<double>(d) / static_cast<double>(n * (n * n - 1));
}

double kendall_tau(std::span<const int> rank_true, std::span<const int> rank_pred) {
  check_permutations(rank_true, rank_pred, "kendall_tau");
  const std::size_t n = rank_true.size();
  // Predicted ranks listed in true order; each inversion is a discordant pair.
  std::vector<int> seq(n);
  for (std::size_t i = 0; i < n; ++i) seq[rank_true[i] - 1] = rank_pred[i];
  std::vector<int> buf(n);
  const std::uint64_t discordant = count_inversions(seq, buf, 0, n);
  const std::uint64_t pairs = n * (n - 1) / 2;
  const double concordant = static_cast<double>(pairs - discordant);
  return (concordant - static_cast<double>(discordant)) / static_cast<double>(pairs);
}

double performance_improvement(double ours, double second_best, PiKind kind) {
  if (second_best == 0.0) throw ValidationError("performance_improvement: reference score is zero");
  const double gain = kind == PiKind::Error ? second_best - ours : ours - second_best;
  return std::abs(gain) / second_best * 100.0;
}

Calibration calibration(std::span<const double> mu, std::span<const double> sigma,
                        std::span<const double> y) {
  if (mu.size() != sigma.size() || mu.size() != y.size()) {
    throw ValidationError("calibration: misaligned inputs");
  }
  Calibration c;
  c.n = y.size();
  if (c.n == 0) return c;
  std::size_t in68 = 0, in95 = 0;
  double nll = 0.0;
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(sigma[i] > 0.0)) throw ContractError("calibration: non-positive standard deviation");
    const double e = std::abs(y[i] - mu[i]);
    in68 += e <= 1.0 * sigma[i];
    in95 += e <= 1.96 * sigma[i];
    const double z = e / sigma[i];
    nll += half_log_2pi + std::log(sigma[i]) + 0.5 * z * z;
  }
  const double n = static_cast<double>(c.n);
  c.coverage_68 = static_cast<double>(in68) / n;
  c.coverage_95 = static_cast<double>(in95) / n;
  c.nll = nll / n;
  return c;
}

RankSummary rank_metrics(std::span<const ScenePrediction> scenes) {
  RankSummary s;
  double rho = 0.0, tau = 0.0;
  for (const auto& sc : scenes) {
    if (sc.y_true.size() < 2) {
      ++s.skipped;
      continue;
    }
    // Rank by landing timestamp; t_end is shared, so remaining time suffices.
    Ranking rt = rank_by_time(sc.y_true, sc.callsigns);
    Ranking rp = rank_by_time(sc.mu, sc.callsigns);
    if (rt.ties || rp.ties) ++s.tie_scenes;
    rho += spearman_rho(rt.ranks, rp.ranks);
    tau += kendall_tau(rt.ranks, rp.ranks);
    ++s.scenes;
  }
  if (s.scenes) {
    s.spearman = rho / static_cast<double>(s.scenes);
    s.kendall = tau / static_cast<double>(s.scenes);
  }
  return s;
}

}  // namespace ltp::eval
