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


#include "ltp/app/run_config.hpp"

#include <nlohmann/json.hpp>

#include "config_file.hpp"
#include "ltp/error.hpp"

namespace ltp::app {

using json = nlohmann::json;
using detail::read_opt;

namespace {

RunConfig from_document(const json& j) {
  RunConfig c;
  read_opt(j, "seed", c.seed);
  if (auto it = j.find("data"); it != j.end()) {
    auto& d = c.data;
    read_opt(*it, "steps", d.steps);
    read_opt(*it, "dt", d.dt);
    read_opt(*it, "max_agents", d.max_agents);
    read_opt(*it, "arp_lat", d.arp.lat);
    read_opt(*it, "arp_lon", d.arp.lon);
    read_opt(*it, "ring_nm", d.ring_nm);
    read_opt(*it, "flights_per_group", d.flights_per_group);
    if (auto s = it->find("split"); s != it->end()) {
      const auto r = s->get<std::vector<double>>();
      if (r.size() != 3) throw ValidationError("data.split needs three ratios");
      d.split = {r[0], r[1], r[2]};
    }
  }
  if (auto it = j.find("model"); it != j.end()) {
    auto& m = c.model;
    read_opt(*it, "model_dim", m.model_dim);
    read_opt(*it, "layers", m.layers);
    read_opt(*it, "heads_mma", m.heads_mma);
    read_opt(*it, "heads_aa", m.heads_aa);
    read_opt(*it, "ffn_dim", m.ffn_dim);
    read_opt(*it, "dropout", m.dropout);
    read_opt(*it, "gpd_hidden", m.gpd_hidden);
    read_opt(*it, "output_projections", m.output_projections);
    std::string sigma = model::to_string(m.sigma);
    read_opt(*it, "sigma", sigma);
    m.sigma = model::parse_sigma_param(sigma);
  }
  if (auto it = j.find("optim"); it != j.end()) {
    auto& s = c.optim.schedule;
    read_opt(*it, "lr_max", s.lr_max);
    read_opt(*it, "lr_min", s.lr_min);
    read_opt(*it, "cycle_epochs", s.cycle_epochs);
    std::string shape = num::to_string(s.shape);
    read_opt(*it, "schedule", shape);
    s.shape = num::parse_lr_shape(shape);
    auto& a = c.optim.adamw;
    read_opt(*it, "beta1", a.beta1);
    read_opt(*it, "beta2", a.beta2);
    read_opt(*it, "eps", a.eps);
    read_opt(*it, "weight_decay", a.weight_decay);
  }
  if (auto it = j.find("train"); it != j.end()) {
    auto& t = c.train;
    read_opt(*it, "epochs", t.epochs);
    read_opt(*it, "batch_scenes", t.batch_scenes);
    read_opt(*it, "patience", t.patience);
    read_opt(*it, "device_threads", t.device_threads);
    read_opt(*it, "chunk_scenes", t.chunk_scenes);
    read_opt(*it, "overfit_scenes", t.overfit_scenes);
    read_opt(*it, "max_train_scenes", t.max_train_scenes);
  }
  // The data window length is the model's sequence length.
  c.model.steps = c.data.steps;
  return c;
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
  const json j = detail::load_config_document(path);
  RunConfig c;
  try {
    c = from_document(j);
  } catch (const json::exception& e) {
    throw ValidationError("run config " + path.string() + ": " + e.what());
  }
  validate(c);
  return c;
}

RunConfig run_config_from_json(const std::string& text) {
  RunConfig c;
  try {
    c = from_document(json::parse(text));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("run config: ") + e.what());
  }
  validate(c);
  return c;
}

std::string run_config_to_json(const RunConfig& c) {
  const auto& d = c.data;
  const auto& m = c.model;
  const auto& s = c.optim.schedule;
  const auto& a = c.optim.adamw;
  const auto& t = c.train;
  json j{
      {"seed", c.seed},
      {"data",
       {{"steps", d.steps},
        {"dt", d.dt},
        {"max_agents", d.max_agents},
        {"arp_lat", d.arp.lat},
        {"arp_lon", d.arp.lon},
        {"ring_nm", d.ring_nm},
        {"flights_per_group", d.flights_per_group},
        {"split", {d.split.train, d.split.val, d.split.test}}}},
      {"model",
       {{"model_dim", m.model_dim},
        {"layers", m.layers},
        {"heads_mma", m.heads_mma},
        {"heads_aa", m.heads_aa},
        {"ffn_dim", m.ffn_dim},
        {"dropout", m.dropout},
        {"gpd_hidden", m.gpd_hidden},
        {"output_projections", m.output_projections},
        {"sigma", model::to_string(m.sigma)}}},
      {"optim",
       {{"lr_max", s.lr_max},
        {"lr_min", s.lr_min},
        {"cycle_epochs", s.cycle_epochs},
        {"schedule", num::to_string(s.shape)},
        {"beta1", a.beta1},
        {"beta2", a.beta2},
        {"eps", a.eps},
        {"weight_decay", a.weight_decay}}},
      {"train",
       {{"epochs", t.epochs},
        {"batch_scenes", t.batch_scenes},
        {"patience", t.patience},
        {"device_threads", t.device_threads},
        {"chunk_scenes", t.chunk_scenes},
        {"overfit_scenes", t.overfit_scenes},
        {"max_train_scenes", t.max_train_scenes}}},
  };
  return j.dump(2);
}

void validate(const RunConfig& c) {
  auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ValidationError("run config: " + what);
  };
  model::validate(c.model);
  need(c.data.steps >= 2, "data.steps must be >= 2");
  need(c.data.dt > 0, "data.dt must be positive");
  need(c.data.max_agents >= 1, "data.max_agents must be >= 1");
  need(c.data.ring_nm > 0, "data.ring_nm must be positive");
  need(c.data.flights_per_group >= 1, "data.flights_per_group must be >= 1");
  need(c.optim.schedule.lr_max > 0 && c.optim.schedule.lr_min >= 0 &&
           c.optim.schedule.lr_min <= c.optim.schedule.lr_max,
       "optim: need 0 <= lr_min <= lr_max, lr_max > 0");
  need(c.optim.schedule.cycle_epochs >= 1, "optim.cycle_epochs must be >= 1");
  need(c.train.epochs >= 1, "train.epochs must be >= 1");
  need(c.train.batch_scenes >= 1, "train.batch_scenes must be >= 1");
  need(c.train.device_threads >= 1, "train.device_threads must be >= 1");
  need(c.train.chunk_scenes >= 1, "train.chunk_scenes must be >= 1");
  need(c.train.patience >= 0 && c.train.overfit_scenes >= 0 && c.train.max_train_scenes >= 0,
       "train counts must be non-negative");
}

}  // namespace ltp::app
