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


#include "ltp/app/checkpoint.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "ltp/error.hpp"
#include "ltp/numerics/archive.hpp"

namespace ltp::app {

using json = nlohmann::json;

std::string norm_stats_to_json(const geo::NormStats& s) {
  return json{{"mean", s.mean},
              {"std", s.std},
              {"target_mean", s.target_mean},
              {"target_std", s.target_std}}
      .dump();
}

geo::NormStats norm_stats_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    geo::NormStats s;
    s.mean = j.at("mean").get<std::array<double, geo::kChannels>>();
    s.std = j.at("std").get<std::array<double, geo::kChannels>>();
    s.target_mean = j.at("target_mean").get<double>();
    s.target_std = j.at("target_std").get<double>();
    return s;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("normalization stats: ") + e.what());
  }
}

namespace {

std::string state_to_json(const TrainState& s, std::int64_t adam_step) {
  json j{{"epoch", s.epoch},
         {"best_epoch", s.best_epoch},
         {"bad_epochs", s.bad_epochs},
         {"adam_step", adam_step},
         {"best_val", nullptr}};
  if (std::isfinite(s.best_val)) j["best_val"] = s.best_val;
  return j.dump();
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const RunConfig& cfg,
                     const geo::NormStats& stats, const TrainState& state,
                     const model::LandingTimeModel& model, const num::AdamWState* adam,
                     const eval::MlrModel* mlr) {
  num::Archive ar;
  const auto& params = model.params();
  for (const auto& p : params) ar.tensors.emplace_back("param/" + p.name, p.value);
  if (adam) {
    for (const auto& p : params) ar.tensors.emplace_back("adam_m/" + p.name, adam->m[p.index]);
    for (const auto& p : params) ar.tensors.emplace_back("adam_v/" + p.name, adam->v[p.index]);
  }
  ar.blobs["run_config"] = run_config_to_json(cfg);
  ar.blobs["norm_stats"] = norm_stats_to_json(stats);
  ar.blobs["state"] = state_to_json(state, adam ? adam->step : 0);
  if (mlr) ar.blobs["mlr"] = mlr->to_json();
  num::write_archive(path, ar);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  const num::Archive ar = num::read_archive(path);
  auto blob = [&](const std::string& name) -> const std::string& {
    const std::string* b = ar.blob(name);
    if (!b) throw ValidationError(path.string() + ": checkpoint lacks '" + name + "'");
    return *b;
  };

  Checkpoint ck;
  ck.config = run_config_from_json(blob("run_config"));
  ck.stats = norm_stats_from_json(blob("norm_stats"));
  std::int64_t adam_step = 0;
  try {
    const json s = json::parse(blob("state"));
    ck.state.epoch = s.at("epoch").get<int>();
    ck.state.best_epoch = s.at("best_epoch").get<int>();
    ck.state.bad_epochs = s.at("bad_epochs").get<int>();
    adam_step = s.at("adam_step").get<std::int64_t>();
    if (!s.at("best_val").is_null()) ck.state.best_val = s.at("best_val").get<double>();
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": bad training state: " + e.what());
  }

  ck.model = std::make_unique<model::LandingTimeModel>(ck.config.model, ck.config.seed);
  auto restore = [&](const std::string& name, num::Tensor& dst) {
    const num::Tensor* t = ar.tensor(name);
    if (!t) throw ValidationError(path.string() + ": missing tensor '" + name + "'");
    if (t->shape() != dst.shape()) {
      throw ValidationError(path.string() + ": tensor '" + name + "' has shape " +
                            num::shape_str(t->shape()) + ", model expects " +
                            num::shape_str(dst.shape()));
    }
    dst = *t;
  };
  auto& params = ck.model->params();
  for (auto& p : params) restore("param/" + p.name, p.value);

  if (!params.size() || ar.tensor("adam_m/" + params[0].name)) {
    num::AdamWState st = num::make_adamw_state(params, ck.config.optim.adamw);
    st.step = adam_step;
    for (auto& p : params) {
      restore("adam_m/" + p.name, st.m[p.index]);
      restore("adam_v/" + p.name, st.v[p.index]);
    }
    ck.adam = std::move(st);
  }
  if (const std::string* m = ar.blob("mlr")) ck.mlr = eval::MlrModel::from_json(*m);
  return ck;
}

}  // namespace ltp::app
