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


#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ltp/error.hpp"
#include "ltp/eval/metrics.hpp"
#include "ltp/eval/mlr.hpp"
#include "ltp/eval/report.hpp"
#include "ltp/rng.hpp"
#include "test_support.hpp"

namespace ltp::eval {
namespace {

std::vector<int> random_perm(Rng& r, int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 1);
  r.shuffle(p);
  return p;
}

double brute_spearman(const std::vector<int>& a, const std::vector<int>& b) {
  const double n = static_cast<double>(a.size());
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return 1.0 - 6.0 * d / (n * (n * n - 1));
}

double brute_kendall(const std::vector<int>& a, const std::vector<int>& b) {
  long nc = 0, nd = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const long s = static_cast<long>(a[i] - a[j]) * (b[i] - b[j]);
      (s > 0 ? nc : nd) += 1;
    }
  const double pairs = static_cast<double>(a.size() * (a.size() - 1) / 2);
  return static_cast<double>(nc - nd) / pairs;
}

TEST(PointMetrics, HandCases) {
  const std::vector<double> y{100, 200}, yhat{110, 190};
  const auto m = point_metrics(y, yhat);
  EXPECT_DOUBLE_EQ(m.mae, 10.0);
  EXPECT_DOUBLE_EQ(m.rmse, 10.0);
  EXPECT_DOUBLE_EQ(m.mape, 7.5);
  const auto z = point_metrics(y, y);
  EXPECT_EQ(z.mae, 0);
  EXPECT_EQ(z.rmse, 0);
  EXPECT_EQ(z.mape, 0);
  EXPECT_THROW(point_metrics(std::vector<double>{}, std::vector<double>{}), ValidationError);
  EXPECT_THROW(point_metrics(y, std::vector<double>{1}), ValidationError);
}

TEST(PointMetrics, MapeFloorExcludesTinyTargets) {
  const std::vector<double> y{0.5, 100}, yhat{10, 110};
  const auto m = point_metrics(y, yhat);
  EXPECT_EQ(m.mape_excluded, 1u);
  EXPECT_DOUBLE_EQ(m.mape, 10.0);
  EXPECT_DOUBLE_EQ(m.mae, 9.75);
}

TEST(PointMetrics, MaeNeverExceedsRmseAndOrderInvariant) {
  Rng r(1);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> y(30), yh(30);
    for (int i = 0; i < 30; ++i) {
      y[i] = r.uniform(1, 2000);
      yh[i] = y[i] + r.normal() * 50;
    }
    const auto a = point_metrics(y, yh);
    EXPECT_LE(a.mae, a.rmse + 1e-12);
    std::vector<int> idx(30);
    std::iota(idx.begin(), idx.end(), 0);
    r.shuffle(idx);
    std::vector<double> y2, yh2;
    for (int i : idx) y2.push_back(y[i]), yh2.push_back(yh[i]);
    const auto b = point_metrics(y2, yh2);
    EXPECT_NEAR(a.mae, b.mae, 1e-9);
    EXPECT_NEAR(a.rmse, b.rmse, 1e-9);
    EXPECT_NEAR(a.mape, b.mape, 1e-9);
  }
}

TEST(Ranks, HandCases) {
  const std::vector<int> id{1, 2, 3, 4}, swap{2, 1, 3, 4};
  EXPECT_EQ(spearman_rho(id, id), 1.0);
  EXPECT_EQ(spearman_rho(id, swap), 0.8);
  EXPECT_EQ(kendall_tau(id, id), 1.0);
  const std::vector<int> a{1, 2, 3}, rev{3, 2, 1}, adj{2, 1, 3};
  EXPECT_EQ(spearman_rho(a, rev), -1.0);
  EXPECT_EQ(kendall_tau(a, rev), -1.0);
  EXPECT_DOUBLE_EQ(kendall_tau(a, adj), 1.0 / 3.0);
  const std::vector<int> one{1};
  EXPECT_THROW(spearman_rho(one, one), ValidationError);
  EXPECT_THROW(kendall_tau(one, one), ValidationError);
  const std::vector<int> not_perm{1, 1, 3};
  EXPECT_THROW(kendall_tau(a, not_perm), ValidationError);
}

TEST(Ranks, MatchBruteForceOracles) {
  Rng r(2);
  for (int t = 0; t < 2000; ++t) {
    const int n = 2 + static_cast<int>(r.below(40));
    const auto a = random_perm(r, n);
    const auto b = random_perm(r, n);
    EXPECT_NEAR(spearman_rho(a, b), brute_spearman(a, b), 1e-12);
    EXPECT_EQ(kendall_tau(a, b), brute_kendall(a, b));
    const bool same = a == b;
    EXPECT_EQ(spearman_rho(a, b) == 1.0, same);
    EXPECT_EQ(kendall_tau(a, b) == 1.0, same);
  }
}

TEST(Ranks, RankByTimeAndMonotoneInvariance) {
  const std::vector<double> t{30, 10, 20};
  const std::vector<std::string> keys{"C", "A", "B"};
  const auto r = rank_by_time(t, keys);
  EXPECT_EQ(r.ranks, (std::vector<int>{3, 1, 2}));
  EXPECT_FALSE(r.ties);
  const std::vector<double> tied{10, 10, 5};
  const std::vector<std::string> k2{"B", "A", "C"};
  const auto rt = rank_by_time(tied, k2);
  EXPECT_TRUE(rt.ties);
  EXPECT_EQ(rt.ranks, (std::vector<int>{3, 2, 1}));

  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    ScenePrediction sp;
    for (int i = 0; i < 6; ++i) {
      sp.callsigns.push_back("F" + std::to_string(i));
      sp.y_true.push_back(rng.uniform(0, 1000));
      sp.mu.push_back(rng.uniform(0, 1000));
    }
    ScenePrediction warped = sp;
    for (double& m : warped.mu) m = std::exp(m / 300.0) * 7 + 3;
    const auto a = rank_metrics(std::span(&sp, 1));
    const auto b = rank_metrics(std::span(&warped, 1));
    EXPECT_EQ(a.spearman, b.spearman);
    EXPECT_EQ(a.kendall, b.kendall);
  }
}

TEST(Ranks, MacroAverageSkipsSingletons) {
  std::vector<ScenePrediction> s(3);
  s[0] = {"a", 0, {"X", "Y"}, {10, 20}, {10, 20}, {}};
  s[1] = {"b", 0, {"X", "Y"}, {10, 20}, {20, 10}, {}};
  s[2] = {"c", 0, {"X"}, {10}, {11}, {}};
  const auto r = rank_metrics(s);
  EXPECT_EQ(r.scenes, 2u);
  EXPECT_EQ(r.skipped, 1u);
  EXPECT_EQ(r.spearman, 0.0);
  EXPECT_EQ(r.kendall, 0.0);
}

TEST(Improvement, TableArithmetic) {
  EXPECT_NEAR(performance_improvement(6.1930, 47.3400, PiKind::Error), 86.92, 0.05);
  EXPECT_NEAR(performance_improvement(1.000, 0.985, PiKind::Rank), 1.52, 0.03);
  EXPECT_EQ(performance_improvement(5.0, 5.0, PiKind::Error), 0.0);
  EXPECT_THROW(performance_improvement(1.0, 0.0, PiKind::Rank), ValidationError);
}

TEST(Calibration, BoundaryAndLimits) {
  const std::vector<double> mu{0, 10, -5}, sigma{1, 2, 3};
  std::vector<double> y;
  for (int i = 0; i < 3; ++i) y.push_back(mu[i] + sigma[i]);
  const auto c = calibration(mu, sigma, y);
  EXPECT_EQ(c.coverage_68, 1.0);
  EXPECT_EQ(c.coverage_95, 1.0);
  const std::vector<double> huge{1e12, 1e12, 1e12}, far{1e5, -1e5, 3e5};
  EXPECT_EQ(calibration(mu, huge, far).coverage_68, 1.0);
  EXPECT_TRUE(std::isfinite(c.nll));
}

TEST(Calibration, GaussianSamplesCoverNominal) {
  Rng r(4);
  std::vector<double> mu, sigma, y;
  for (int i = 0; i < 20000; ++i) {
    mu.push_back(r.uniform(-100, 100));
    sigma.push_back(r.uniform(0.5, 30));
    y.push_back(mu.back() + sigma.back() * r.normal());
  }
  const auto c = calibration(mu, sigma, y);
  EXPECT_NEAR(c.coverage_95, 0.95, 0.02);
  EXPECT_NEAR(c.coverage_68, 0.6827, 0.02);
}

// ------------------------------------------------------------------ MLR

/// Normal equations by Gauss-Jordan elimination with partial pivoting.
std::vector<double> oracle_ols(const std::vector<std::vector<double>>& x, const std::vector<double>& y) {
  const std::size_t p = x[0].size() + 1;
  std::vector<std::vector<double>> a(p, std::vector<double>(p + 1, 0.0));
  for (std::size_t n = 0; n < x.size(); ++n) {
    std::vector<double> row = x[n];
    row.push_back(1.0);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < p; ++j) a[i][j] += row[i] * row[j];
      a[i][p] += row[i] * y[n];
    }
  }
  for (std::size_t c = 0; c < p; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < p; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    for (std::size_t r = 0; r < p; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= p; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<double> beta(p);
  for (std::size_t i = 0; i < p; ++i) beta[i] = a[i][p] / a[i][i];
  return beta;  // weights..., bias
}

TEST(Mlr, MatchesNormalEquationOracle) {
  Rng r(5);
  std::vector<std::vector<double>> x(100, std::vector<double>(60));
  std::vector<double> y(100);
  for (auto& row : x)
    for (double& v : row) v = r.normal();
  for (double& v : y) v = r.normal();
  const auto m = MlrModel::fit(x, y);
  const auto beta = oracle_ols(x, y);
  for (int i = 0; i < 60; ++i) EXPECT_NEAR(m.weights()[i], beta[i], 1e-6);
  EXPECT_NEAR(m.bias(), beta[60], 1e-6);
}

TEST(Mlr, ExactLinearTargetsAndConstants) {
  Rng r(6);
  std::vector<std::vector<double>> x(150, std::vector<double>(60));
  std::vector<double> w(60), y(150), c(150, 2.5);
  for (double& v : w) v = r.normal();
  for (std::size_t n = 0; n < x.size(); ++n) {
    for (double& v : x[n]) v = r.normal();
    y[n] = 0.3 + std::inner_product(w.begin(), w.end(), x[n].begin(), 0.0);
  }
  const auto m = MlrModel::fit(x, y);
  for (std::size_t n = 0; n < x.size(); ++n) EXPECT_NEAR(m.predict_std(x[n]), y[n], 1e-6);
  const auto k = MlrModel::fit(x, c);
  for (double v : k.weights()) EXPECT_NEAR(v, 0.0, 1e-9);
  EXPECT_NEAR(k.bias(), 2.5, 1e-9);
  EXPECT_THROW(MlrModel::fit(std::span(x).first(60), std::span(y).first(60)), ValidationError);
}

TEST(Mlr, SingleAgentFeaturesIgnoreNeighbours) {
  Rng r(7);
  std::vector<geo::NormalizedScene> train;
  for (int i = 0; i < 40; ++i) train.push_back(testing::random_normalized_scene(r, 3));
  const auto m = MlrModel::fit(train);
  geo::NormStats st;
  st.target_mean = 500;
  st.target_std = 200;
  auto scene = testing::random_normalized_scene(r, 3);
  const auto before = m.predict(scene, st);
  for (int k = 60; k < 180; ++k) scene.x[k] += r.normal() * 5;
  const auto after = m.predict(scene, st);
  EXPECT_EQ(before[0], after[0]);
  EXPECT_NE(before[1], after[1]);
  const auto back = MlrModel::from_json(m.to_json());
  EXPECT_EQ(back.weights(), m.weights());
  EXPECT_EQ(back.bias(), m.bias());
}

// --------------------------------------------------------------- report

TEST(Report, PerfectPredictions) {
  std::vector<ScenePrediction> s(2);
  s[0] = {"a", 10, {"X", "Y", "Z"}, {10, 20, 30}, {10, 20, 30}, {1, 1, 1}};
  s[1] = {"b", 16, {"X", "Y"}, {4, 14}, {4, 14}, {2, 2}};
  const auto rep = evaluate(s, "net");
  EXPECT_EQ(rep.mae_s, 0);
  EXPECT_EQ(rep.spearman_rho, 1);
  EXPECT_EQ(rep.kendall_tau, 1);
  EXPECT_EQ(rep.n_samples, 5u);
  ASSERT_TRUE(rep.coverage_95);
  EXPECT_EQ(*rep.coverage_95, 1.0);
  s[0].sigma.clear();
  EXPECT_FALSE(evaluate(s, "mlr").nll_test);
}

TEST(Report, JsonShapeAndImprovementRow) {
  EvalReport ours, base;
  ours.model = "net";
  ours.mae_s = 6.1930;
  ours.rmse_s = 13.6222;
  ours.spearman_rho = 1.0;
  ours.kendall_tau = 1.0;
  ours.mape_pct = 2.01;
  ours.n_samples = 10;
  base.model = "mlr";
  base.mae_s = 47.34;
  base.rmse_s = 79.1585;
  base.mape_pct = 8.17;
  base.spearman_rho = 0.985;
  base.kendall_tau = 0.981;
  base.n_samples = 10;
  const auto j = nlohmann::json::parse(report_json(ours, &base));
  EXPECT_EQ(j["model"]["model"], "net");
  EXPECT_TRUE(j["model"]["nll_test"].is_null());
  EXPECT_NEAR(j["improvement_pct"]["mae_s"].get<double>(), 86.92, 0.05);
  EXPECT_NEAR(j["improvement_pct"]["rmse_s"].get<double>(), 82.80, 0.05);
  EXPECT_NEAR(j["improvement_pct"]["mape_pct"].get<double>(), 75.39, 0.05);
  EXPECT_NEAR(j["improvement_pct"]["spearman_rho"].get<double>(), 1.52, 0.03);
  EXPECT_NEAR(j["improvement_pct"]["kendall_tau"].get<double>(), 1.94, 0.03);
  const auto solo = nlohmann::json::parse(report_json(ours));
  EXPECT_TRUE(solo["baseline"].is_null());
  const std::string table = report_table(ours, &base);
  EXPECT_NE(table.find("PI (%)"), std::string::npos);
  EXPECT_NE(table.find("86.92"), std::string::npos);
}

}  // namespace
}  // namespace ltp::eval
