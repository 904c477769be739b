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


#include "ltp/app/commands.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ltp/app/checkpoint.hpp"
#include "ltp/app/dataset.hpp"
#include "ltp/app/trainer.hpp"
#include "ltp/error.hpp"
#include "ltp/eval/report.hpp"
#include "ltp/geo/io.hpp"
#include "ltp/synth/generator.hpp"

namespace ltp::app {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.empty()) throw ValidationError("missing output path");
  if (path.has_parent_path() && !fs::exists(path.parent_path())) {
    throw IoError("cannot write " + path.string() + ": directory does not exist");
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  return f;
}

RunConfig load_or_default(const fs::path& config) {
  return config.empty() ? RunConfig{} : load_run_config(config);
}

/// Applies the checkpoint's agent cap, warning per truncated scene.
void cap_agents(std::vector<geo::Scene>& scenes, int max_agents, std::ostream& err) {
  for (auto& s : scenes) {
    const int before = s.agent_count();
    if (geo::truncate_agents(s, max_agents)) {
      err << "warning: scene " << s.scene_id << " has " << before << " aircraft; keeping the "
          << max_agents << " closest to landing\n";
    }
  }
}

}  // namespace

int run_guarded(const std::function<int()>& fn, std::ostream& err) {
  try {
    return fn();
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "error: malformed input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_gen_data(const GenDataArgs& a, Console io) {
  if (a.flights <= 0) throw ValidationError("--flights must be positive");
  if (!(a.rate_per_hr > 0)) throw ValidationError("--rate must be positive");
  const synth::AirspaceConfig cfg =
      a.config.empty() ? synth::AirspaceConfig{} : synth::load_airspace_config(a.config);
  const synth::Corpus corpus = synth::generate_corpus(cfg, a.flights, a.rate_per_hr, a.seed);
  for (const auto& w : corpus.warnings) io.err << "warning: " << w << '\n';

  {
    auto f = open_out(a.out);
    geo::write_tracks(f, corpus.tracks(), geo::track_format_for(a.out));
    if (!f) throw IoError("write failed: " + a.out.string());
  }

  const auto violations = synth::check_separation(corpus, cfg.sep_matrix_s);
  double first = corpus.flights.front().landing_time, last = first;
  for (const auto& f : corpus.flights) {
    first = std::min(first, f.landing_time);
    last = std::max(last, f.landing_time);
  }
  const double hours = (last - first) / 3600.0;
  char line[200];
  std::snprintf(line, sizeof line, "flights %zu  landings/hr %.2f  separation violations %zu\n",
                corpus.flights.size(),
                hours > 0 ? static_cast<double>(corpus.flights.size() - 1) / hours : 0.0,
                violations.size());
  io.out << line;
  return kExitOk;
}

int cmd_preprocess(const PreprocessArgs& a, Console io) {
  RunConfig cfg = load_or_default(a.config);
  if (a.seed) cfg.seed = *a.seed;
  const PreparedData d = prepare_data(geo::read_tracks(a.tracks), cfg);
  if (a.out_dir.empty()) throw ValidationError("missing output directory");
  fs::create_directories(a.out_dir);
  geo::write_scenes(a.out_dir / "train.jsonl", d.train);
  geo::write_scenes(a.out_dir / "val.jsonl", d.val);
  geo::write_scenes(a.out_dir / "test.jsonl", d.test);
  open_out(a.out_dir / "norm_stats.json") << norm_stats_to_json(d.stats) << '\n';
  io.out << "tracks " << d.info.tracks_in << " (dropped " << d.info.tracks_dropped << ")  scenes "
         << d.info.scenes << "  train/val/test " << d.train.size() << '/' << d.val.size() << '/'
         << d.test.size() << "  mixed-split scenes dropped " << d.info.dropped_mixed << '\n';
  return kExitOk;
}

int cmd_train(const TrainArgs& a, Console io) {
  RunConfig cfg = load_or_default(a.config);
  if (a.seed) cfg.seed = *a.seed;
  if (a.epochs) cfg.train.epochs = *a.epochs;
  if (a.batch) cfg.train.batch_scenes = *a.batch;
  if (a.device_threads) cfg.train.device_threads = *a.device_threads;
  if (a.patience) cfg.train.patience = *a.patience;
  if (a.overfit_scenes) cfg.train.overfit_scenes = *a.overfit_scenes;
  validate(cfg);
  if (a.out.empty()) throw ValidationError("missing --out checkpoint path");
  open_out(a.out).close();  // fail early on unwritable destinations
  fs::remove(a.out);

  const PreparedData d = prepare_data(geo::read_tracks(a.tracks), cfg);
  if (!a.quiet) {
    io.out << "scenes train/val/test " << d.train.size() << '/' << d.val.size() << '/'
           << d.test.size() << '\n';
  }
  TrainOptions opt;
  opt.checkpoint = a.out;
  opt.log = a.log;
  if (opt.log.empty()) {
    opt.log = a.out;
    opt.log += ".csv";
  }
  opt.resume = a.resume;
  if (!a.quiet) {
    opt.on_epoch = [&](const EpochLog& e) {
      char line[160];
      std::snprintf(line, sizeof line, "epoch %4d  lr %.3e  train_nll %.5f  val_nll %.5f  %.1fs\n",
                    e.epoch, e.lr, e.train_nll, e.val_nll, e.wall_s);
      io.out << line << std::flush;
    };
  }
  try {
    const TrainResult r = train(d, cfg, opt);
    io.out << "best val_nll " << r.state.best_val << " at epoch " << r.state.best_epoch
           << (r.early_stopped ? " (early stop)" : "") << '\n';
  } catch (const NumericalError& e) {
    io.err << "numerical failure: " << e.what() << "; last good checkpoint kept at "
           << a.out.string() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_predict(const PredictArgs& a, Console io) {
  if (a.model != "net" && a.model != "mlr") {
    throw ValidationError("--model must be 'net' or 'mlr', got '" + a.model + "'");
  }
  const Checkpoint ck = load_checkpoint(a.checkpoint);
  if (a.model == "mlr" && !ck.mlr) throw ValidationError("checkpoint has no baseline model");
  std::vector<geo::Scene> scenes = geo::read_scenes(a.scenes);
  cap_agents(scenes, ck.config.data.max_agents, io.err);
  const auto normalized = normalize_all(scenes, ck.stats);

  std::vector<std::vector<model::GaussianPrediction>> preds;
  if (a.model == "net") {
    preds = predict_all(*ck.model, normalized, ck.stats, a.device_threads);
  } else {
    for (const auto& s : normalized) {
      std::vector<model::GaussianPrediction> row;
      for (double mu : ck.mlr->predict(s, ck.stats)) {
        model::GaussianPrediction p;
        p.mu_s = mu;
        p.sigma_s = std::nan("");
        row.push_back(p);
      }
      preds.push_back(std::move(row));
    }
  }

  auto f = open_out(a.out);
  std::size_t rows = 0;
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    const geo::Scene& sc = scenes[s];
    for (std::size_t i = 0; i < sc.agents.size(); ++i) {
      const auto& p = preds[s][i];
      json j{{"scene_id", sc.scene_id},
             {"callsign", sc.agents[i].callsign},
             {"t_end", sc.t_end},
             {"mu_s", p.mu_s},
             {"sigma_s", std::isnan(p.sigma_s) ? json() : json(p.sigma_s)},
             {"landing_time_s", sc.t_end + p.mu_s},
             {"y_true_s", sc.agents[i].remaining_s}};
      f << j.dump() << '\n';
      ++rows;
    }
  }
  if (!f) throw IoError("write failed: " + a.out.string());
  io.out << "wrote " << rows << " predictions for " << scenes.size() << " scenes\n";
  return kExitOk;
}

namespace {

struct PredRow {
  double mu = 0.0;
  std::optional<double> sigma;
};

using PredTable = std::map<std::pair<std::string, std::string>, PredRow>;

PredTable read_predictions(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read " + path.string());
  PredTable t;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      PredRow r;
      r.mu = j.at("mu_s").get<double>();
      if (j.contains("sigma_s") && !j["sigma_s"].is_null()) r.sigma = j["sigma_s"].get<double>();
      t[{j.at("scene_id").get<std::string>(), j.at("callsign").get<std::string>()}] = r;
    } catch (const json::exception& e) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return t;
}

/// Joins predictions with labels; returns mismatch descriptions.
std::vector<std::string> align(const PredTable& preds, const std::vector<geo::Scene>& labels,
                               std::vector<eval::ScenePrediction>& out) {
  std::vector<std::string> problems;
  std::set<std::pair<std::string, std::string>> used;
  for (const auto& sc : labels) {
    eval::ScenePrediction sp;
    sp.scene_id = sc.scene_id;
    sp.t_end = sc.t_end;
    bool all_sigma = true;
    for (const auto& ag : sc.agents) {
      const auto key = std::make_pair(sc.scene_id, ag.callsign);
      auto it = preds.find(key);
      if (it == preds.end()) {
        problems.push_back("missing prediction for " + sc.scene_id + "/" + ag.callsign);
        continue;
      }
      used.insert(key);
      sp.callsigns.push_back(ag.callsign);
      sp.y_true.push_back(ag.remaining_s);
      sp.mu.push_back(it->second.mu);
      if (it->second.sigma) {
        sp.sigma.push_back(*it->second.sigma);
      } else {
        all_sigma = false;
      }
    }
    if (!all_sigma) sp.sigma.clear();
    out.push_back(std::move(sp));
  }
  for (const auto& [key, row] : preds) {
    if (!used.count(key)) problems.push_back("prediction without label: " + key.first + "/" + key.second);
  }
  return problems;
}

}  // namespace

int cmd_evaluate(const EvaluateArgs& a, Console io) {
  std::vector<geo::Scene> labels = geo::read_scenes(a.labels);

  auto load = [&](const fs::path& path, std::vector<eval::ScenePrediction>& out) {
    const auto problems = align(read_predictions(path), labels, out);
    if (problems.empty()) return true;
    io.err << "error: " << path.string() << " does not match " << a.labels.string() << " ("
           << problems.size() << " mismatches)\n";
    for (std::size_t i = 0; i < problems.size() && i < 10; ++i) io.err << "  " << problems[i] << '\n';
    return false;
  };

  std::vector<eval::ScenePrediction> model_rows, base_rows;
  if (!load(a.predictions, model_rows)) return kExitUsage;
  const eval::EvalReport model = eval::evaluate(model_rows, a.predictions.stem().string());
  std::optional<eval::EvalReport> baseline;
  if (!a.baseline.empty()) {
    if (!load(a.baseline, base_rows)) return kExitUsage;
    baseline = eval::evaluate(base_rows, a.baseline.stem().string());
  }
  const eval::EvalReport* bp = baseline ? &*baseline : nullptr;
  io.out << eval::report_table(model, bp);
  if (!a.out.empty()) open_out(a.out) << eval::report_json(model, bp);
  return kExitOk;
}

int cmd_export_attention(const ExportAttentionArgs& a, Console io) {
  const Checkpoint ck = load_checkpoint(a.checkpoint);
  std::vector<geo::Scene> scenes = geo::read_scenes(a.scenes);
  cap_agents(scenes, ck.config.data.max_agents, io.err);
  auto f = open_out(a.out);
  std::size_t records = 0;
  for (const auto& sc : scenes) {
    const geo::NormalizedScene ns = geo::normalize_scene(sc, ck.stats);
    num::Tape tape;
    num::ParamBinder bind(tape);
    const model::ForwardResult r = ck.model->forward(bind, model::make_input(ns), nullptr);
    for (std::size_t l = 0; l < r.agent_scores.size(); ++l) {
      const num::Tensor& s = r.agent_scores[l];
      json scores = json::array();
      for (int i = 0; i < s.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < s.cols(); ++k) row.push_back(static_cast<double>(s.at(i, k)));
        scores.push_back(std::move(row));
      }
      json j{{"scene_id", sc.scene_id},
             {"layer", static_cast<int>(l) + 1},
             {"callsigns", ns.callsigns},
             {"scores", std::move(scores)}};
      f << j.dump() << '\n';
      ++records;
    }
  }
  if (!f) throw IoError("write failed: " + a.out.string());
  io.out << "wrote " << records << " attention records for " << scenes.size() << " scenes\n";
  return kExitOk;
}

int cmd_inspect_checkpoint(const fs::path& checkpoint, Console io) {
  const Checkpoint ck = load_checkpoint(checkpoint);
  const auto& st = ck.state;
  io.out << "checkpoint " << checkpoint.string() << '\n'
         << "  parameters " << ck.model->params().size() << " tensors, "
         << ck.model->params().numel() << " values\n"
         << "  epoch " << st.epoch << "  best val_nll " << st.best_val << " (epoch " << st.best_epoch
         << ")\n"
         << "  optimizer state " << (ck.adam ? "yes (step " + std::to_string(ck.adam->step) + ")" : "no")
         << "  baseline " << (ck.mlr ? "yes" : "no") << '\n'
         << "  normalization " << norm_stats_to_json(ck.stats) << '\n'
         << "run config\n"
         << run_config_to_json(ck.config) << '\n';
  return kExitOk;
}

}  // namespace ltp::app
