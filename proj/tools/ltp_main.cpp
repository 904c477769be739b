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


// ltp: command-line front end for the landing-time prediction pipeline.

#include <CLI/CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "ltp/app/commands.hpp"

namespace {

template <typename T>
std::optional<T> if_set(CLI::Option* opt, const T& value) {
  return opt->count() ? std::optional<T>(value) : std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ltp::app;
  CLI::App cli{"Multi-agent aircraft landing time prediction"};
  cli.require_subcommand(1);
  Console io{std::cout, std::cerr};
  std::function<int()> action;

  // gen-data
  GenDataArgs gen;
  auto* gen_cmd = cli.add_subcommand("gen-data", "Generate a synthetic arrival corpus");
  gen_cmd->add_option("--config", gen.config, "Airspace config (TOML or JSON)")->check(CLI::ExistingFile);
  gen_cmd->add_option("--out", gen.out, "Track file (.csv or .jsonl)")->required();
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--flights", gen.flights, "Number of flights");
  gen_cmd->add_option("--rate", gen.rate_per_hr, "Arrivals per hour");
  gen_cmd->callback([&] { action = [&] { return cmd_gen_data(gen, io); }; });

  // preprocess
  PreprocessArgs pre;
  std::uint64_t pre_seed = 0;
  auto* pre_cmd = cli.add_subcommand("preprocess", "Build and split scenes from tracks");
  pre_cmd->add_option("--config", pre.config, "Run config (TOML or JSON)")->check(CLI::ExistingFile);
  pre_cmd->add_option("--tracks", pre.tracks, "Track file")->required();
  pre_cmd->add_option("--out", pre.out_dir, "Output directory")->required();
  auto* pre_seed_opt = pre_cmd->add_option("--seed", pre_seed, "Split seed");
  pre_cmd->callback([&] {
    pre.seed = if_set(pre_seed_opt, pre_seed);
    action = [&] { return cmd_preprocess(pre, io); };
  });

  // train
  TrainArgs tr;
  std::uint64_t tr_seed = 0;
  int tr_epochs = 0, tr_batch = 0, tr_threads = 0, tr_patience = 0, tr_overfit = 0;
  auto* tr_cmd = cli.add_subcommand("train", "Train the model");
  tr_cmd->add_option("--config", tr.config, "Run config (TOML or JSON)")->check(CLI::ExistingFile);
  tr_cmd->add_option("--tracks", tr.tracks, "Track file")->required();
  tr_cmd->add_option("--out", tr.out, "Checkpoint path (best validation NLL)")->required();
  tr_cmd->add_option("--log", tr.log, "Epoch log CSV (default <out>.csv)");
  auto* o_seed = tr_cmd->add_option("--seed", tr_seed, "Random seed");
  auto* o_epochs = tr_cmd->add_option("--epochs", tr_epochs, "Epochs");
  auto* o_batch = tr_cmd->add_option("--batch", tr_batch, "Scenes per batch");
  auto* o_threads = tr_cmd->add_option("--device-threads", tr_threads, "Worker threads");
  auto* o_patience = tr_cmd->add_option("--patience", tr_patience, "Early-stop patience in epochs");
  auto* o_overfit = tr_cmd->add_option("--overfit", tr_overfit, "Train and validate on the first K scenes");
  tr_cmd->add_flag("--resume", tr.resume, "Continue from <out>.last");
  tr_cmd->add_flag("--quiet", tr.quiet, "No per-epoch output");
  tr_cmd->callback([&] {
    tr.seed = if_set(o_seed, tr_seed);
    tr.epochs = if_set(o_epochs, tr_epochs);
    tr.batch = if_set(o_batch, tr_batch);
    tr.device_threads = if_set(o_threads, tr_threads);
    tr.patience = if_set(o_patience, tr_patience);
    tr.overfit_scenes = if_set(o_overfit, tr_overfit);
    action = [&] { return cmd_train(tr, io); };
  });

  // predict
  PredictArgs pr;
  auto* pr_cmd = cli.add_subcommand("predict", "Predict remaining flight time per aircraft");
  pr_cmd->add_option("--checkpoint", pr.checkpoint)->required()->check(CLI::ExistingFile);
  pr_cmd->add_option("--scenes", pr.scenes, "Scene JSONL")->required()->check(CLI::ExistingFile);
  pr_cmd->add_option("--out", pr.out, "Prediction JSONL")->required();
  pr_cmd->add_option("--model", pr.model, "net or mlr")->check(CLI::IsMember({"net", "mlr"}));
  pr_cmd->add_option("--device-threads", pr.device_threads, "Worker threads");
  pr_cmd->callback([&] { action = [&] { return cmd_predict(pr, io); }; });

  // evaluate
  EvaluateArgs ev;
  auto* ev_cmd = cli.add_subcommand("evaluate", "Score predictions against labeled scenes");
  ev_cmd->add_option("--predictions", ev.predictions)->required()->check(CLI::ExistingFile);
  ev_cmd->add_option("--labels", ev.labels, "Scene JSONL with labels")->required()->check(CLI::ExistingFile);
  ev_cmd->add_option("--baseline", ev.baseline, "Baseline predictions")->check(CLI::ExistingFile);
  ev_cmd->add_option("--out", ev.out, "JSON report");
  ev_cmd->callback([&] { action = [&] { return cmd_evaluate(ev, io); }; });

  // export-attention
  ExportAttentionArgs ea;
  auto* ea_cmd = cli.add_subcommand("export-attention", "Dump agent-attention matrices");
  ea_cmd->add_option("--checkpoint", ea.checkpoint)->required()->check(CLI::ExistingFile);
  ea_cmd->add_option("--scenes", ea.scenes)->required()->check(CLI::ExistingFile);
  ea_cmd->add_option("--out", ea.out)->required();
  ea_cmd->callback([&] { action = [&] { return cmd_export_attention(ea, io); }; });

  // inspect-checkpoint
  std::filesystem::path inspect_path;
  auto* in_cmd = cli.add_subcommand("inspect-checkpoint", "Describe a checkpoint");
  in_cmd->add_option("checkpoint", inspect_path)->required()->check(CLI::ExistingFile);
  in_cmd->callback([&] { action = [&] { return cmd_inspect_checkpoint(inspect_path, io); }; });

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }
  return run_guarded(action, std::cerr);
}
