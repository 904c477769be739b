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


#include "ltp/eval/report.hpp"

#include <cstdio>
#include <vector>

#include <nlohmann/json.hpp>

#include "ltp/error.hpp"

namespace ltp::eval {

EvalReport evaluate(std::span<const ScenePrediction> scenes, std::string model_name) {
  std::vector<double> y, mu, sigma;
  bool probabilistic = true;
  for (const auto& sc : scenes) {
    if (sc.mu.size() != sc.y_true.size() || sc.callsigns.size() != sc.y_true.size()) {
      throw ValidationError("scene " + sc.scene_id + ": misaligned prediction");
    }
    y.insert(y.end(), sc.y_true.begin(), sc.y_true.end());
    mu.insert(mu.end(), sc.mu.begin(), sc.mu.end());
    if (sc.sigma.size() == sc.mu.size()) {
      sigma.insert(sigma.end(), sc.sigma.begin(), sc.sigma.end());
    } else {
      probabilistic = false;
    }
  }
  EvalReport r;
  r.model = std::move(model_name);
  const PointMetrics pm = point_metrics(y, mu);
  r.mae_s = pm.mae;
  r.rmse_s = pm.rmse;
  r.mape_pct = pm.mape;
  r.mape_excluded = pm.mape_excluded;
  r.n_samples = pm.n;
  r.n_scenes = scenes.size();
  const RankSummary rs = rank_metrics(scenes);
  r.spearman_rho = rs.spearman;
  r.kendall_tau = rs.kendall;
  r.n_rank_scenes = rs.scenes;
  r.tie_scenes = rs.tie_scenes;
  if (probabilistic) {
    const Calibration c = calibration(mu, sigma, y);
    r.nll_test = c.nll;
    r.coverage_68 = c.coverage_68;
    r.coverage_95 = c.coverage_95;
  }
  return r;
}

namespace {

nlohmann::json to_json(const EvalReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); };
  return {{"model", r.model},
          {"mae_s", r.mae_s},
          {"rmse_s", r.rmse_s},
          {"mape_pct", r.mape_pct},
          {"spearman_rho", r.spearman_rho},
          {"kendall_tau", r.kendall_tau},
          {"nll_test", opt(r.nll_test)},
          {"coverage_68", opt(r.coverage_68)},
          {"coverage_95", opt(r.coverage_95)},
          {"n_samples", r.n_samples},
          {"n_scenes", r.n_scenes},
          {"n_rank_scenes", r.n_rank_scenes},
          {"mape_excluded", r.mape_excluded},
          {"tie_scenes", r.tie_scenes}};
}

std::optional<double> safe_pi(double ours, double ref, PiKind kind) {
  if (ref == 0.0) return std::nullopt;
  return performance_improvement(ours, ref, kind);
}

struct Improvement {
  std::optional<double> mae, rmse, mape, rho, tau;
};

Improvement improvement(const EvalReport& m, const EvalReport& b) {
  return {safe_pi(m.mae_s, b.mae_s, PiKind::Error), safe_pi(m.rmse_s, b.rmse_s, PiKind::Error),
          safe_pi(m.mape_pct, b.mape_pct, PiKind::Error),
          safe_pi(m.spearman_rho, b.spearman_rho, PiKind::Rank),
          safe_pi(m.kendall_tau, b.kendall_tau, PiKind::Rank)};
}

std::string cell(const std::optional<double>& v, const char* fmt) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, fmt, *v);
  return buf;
}

}  // namespace

std::string report_json(const EvalReport& model, const EvalReport* baseline) {
  nlohmann::json j{{"model", to_json(model)}, {"baseline", nullptr}, {"improvement_pct", nullptr}};
  if (baseline) {
    j["baseline"] = to_json(*baseline);
    const Improvement pi = improvement(model, *baseline);
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); };
    j["improvement_pct"] = {{"mae_s", opt(pi.mae)},
                            {"rmse_s", opt(pi.rmse)},
                            {"mape_pct", opt(pi.mape)},
                            {"spearman_rho", opt(pi.rho)},
                            {"kendall_tau", opt(pi.tau)}};
  }
  return j.dump(2) + "\n";
}

std::string report_table(const EvalReport& model, const EvalReport* baseline) {
  std::string out;
  char line[256];
  auto row = [&](const std::string& name, const std::string& mae, const std::string& rmse,
                 const std::string& mape, const std::string& rho, const std::string& tau) {
    std::snprintf(line, sizeof line, "%-12s %10s %10s %9s %10s %10s\n", name.c_str(), mae.c_str(),
                  rmse.c_str(), mape.c_str(), rho.c_str(), tau.c_str());
    out += line;
  };
  auto report_row = [&](const EvalReport& r) {
    row(r.model, cell(r.mae_s, "%.4f"), cell(r.rmse_s, "%.4f"), cell(r.mape_pct, "%.2f"),
        cell(r.spearman_rho, "%.3f"), cell(r.kendall_tau, "%.3f"));
  };
  row("Model", "MAE (s)", "RMSE (s)", "MAPE (%)", "Spearman", "Kendall");
  if (baseline) report_row(*baseline);
  report_row(model);
  if (baseline) {
    const Improvement pi = improvement(model, *baseline);
    row("PI (%)", cell(pi.mae, "%.2f"), cell(pi.rmse, "%.2f"), cell(pi.mape, "%.2f"),
        cell(pi.rho, "%.2f"), cell(pi.tau, "%.2f"));
  }
  if (model.nll_test) {
    std::snprintf(line, sizeof line, "\nNLL %.4f  coverage@68 %.3f  coverage@95 %.3f  (n=%zu, scenes=%zu)\n",
                  *model.nll_test, *model.coverage_68, *model.coverage_95, model.n_samples,
                  model.n_scenes);
    out += line;
  }
  return out;
}

}  // namespace ltp::eval
