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


#include "ltp/app/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <thread>

#include "ltp/error.hpp"
#include "ltp/rng.hpp"

namespace ltp::app {

namespace fs = std::filesystem;

fs::path last_checkpoint_path(const fs::path& checkpoint) {
  fs::path p = checkpoint;
  p += ".last";
  return p;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

namespace {

double scene_nll(const model::LandingTimeModel& m, const geo::NormalizedScene& sc) {
  num::Tape tape;
  num::ParamBinder bind(tape);
  const model::SceneInput in = model::make_input(sc);
  const model::ForwardResult r = m.forward(bind, in, nullptr);
  return static_cast<double>(model::nll_loss(r.gauss, in.y, in.pad).total.value().item());
}

}  // namespace

double evaluate_nll(const model::LandingTimeModel& m, std::span<const geo::NormalizedScene> scenes,
                    int threads) {
  if (scenes.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::vector<double> per(scenes.size());
  parallel_for(static_cast<int>(scenes.size()), threads,
               [&](int i) { per[i] = scene_nll(m, scenes[i]); });
  return std::accumulate(per.begin(), per.end(), 0.0) / static_cast<double>(per.size());
}

std::vector<std::vector<model::GaussianPrediction>> predict_all(
    const model::LandingTimeModel& m, std::span<const geo::NormalizedScene> scenes,
    const geo::NormStats& stats, int threads) {
  std::vector<std::vector<model::GaussianPrediction>> out(scenes.size());
  parallel_for(static_cast<int>(scenes.size()), threads,
               [&](int i) { out[i] = m.predict(scenes[i], stats); });
  return out;
}

namespace {

/// Per-chunk gradient buffers; chunk c always covers the same batch slice,
/// so the reduction order is independent of the worker count.
struct GradChunks {
  std::vector<std::vector<num::Tensor>> buffers;
  std::vector<double> loss;

  void ensure(int chunks, const num::ParameterStore& params) {
    while (static_cast<int>(buffers.size()) < chunks) buffers.push_back(num::make_grad_buffers(params));
    loss.assign(static_cast<std::size_t>(chunks), 0.0);
  }
};

void write_log_header(const fs::path& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot write log " + path.string());
  f << "epoch,lr,train_nll,val_nll,wall_s\n";
}

void append_log(const fs::path& path, const EpochLog& e) {
  std::ofstream f(path, std::ios::app);
  if (!f) throw IoError("cannot write log " + path.string());
  char line[160];
  std::snprintf(line, sizeof line, "%d,%.6e,%.6f,%.6f,%.3f\n", e.epoch, e.lr, e.train_nll,
                e.val_nll, e.wall_s);
  f << line;
}

}  // namespace

TrainResult train(const PreparedData& data, const RunConfig& cfg, const TrainOptions& options) {
  const auto& tc = cfg.train;
  std::unique_ptr<model::LandingTimeModel> model;
  num::AdamWState adam;
  TrainResult result;

  const fs::path last = last_checkpoint_path(options.checkpoint);
  if (options.resume && fs::exists(last)) {
    Checkpoint ck = load_checkpoint(last);
    if (!ck.adam) throw ValidationError(last.string() + ": no optimizer state to resume from");
    model = std::move(ck.model);
    adam = std::move(*ck.adam);
    result.state = ck.state;
  } else {
    model = std::make_unique<model::LandingTimeModel>(cfg.model, cfg.seed);
    adam = num::make_adamw_state(model->params(), cfg.optim.adamw);
    if (!options.log.empty()) write_log_header(options.log);
  }

  // Single-agent baseline, fitted once on the training split and shipped
  // with every checkpoint.
  std::optional<eval::MlrModel> mlr;
  {
    std::size_t samples = 0;
    for (const auto& s : data.train_n) samples += static_cast<std::size_t>(s.agents);
    if (samples > static_cast<std::size_t>(3 * cfg.data.steps)) mlr = eval::MlrModel::fit(data.train_n);
  }

  auto& params = model->params();
  const int n_train = static_cast<int>(data.train_n.size());
  const auto& val = data.val_n.empty() ? data.train_n : data.val_n;
  GradChunks chunks;

  for (int epoch = result.state.epoch; epoch < tc.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    const double lr = num::lr_at(epoch, cfg.optim.schedule);

    std::vector<int> order(static_cast<std::size_t>(n_train));
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle = Rng::substream(cfg.seed, "shuffle", static_cast<std::uint64_t>(epoch));
    shuffle.shuffle(order);

    double loss_sum = 0.0;
    for (int b0 = 0; b0 < n_train; b0 += tc.batch_scenes) {
      const int b1 = std::min(n_train, b0 + tc.batch_scenes);
      const int bsize = b1 - b0;
      const int n_chunks = (bsize + tc.chunk_scenes - 1) / tc.chunk_scenes;
      chunks.ensure(n_chunks, params);

      parallel_for(n_chunks, tc.device_threads, [&](int c) {
        auto& buf = chunks.buffers[static_cast<std::size_t>(c)];
        for (auto& g : buf) g.fill(num::Real(0));
        double chunk_loss = 0.0;
        const int s0 = b0 + c * tc.chunk_scenes;
        const int s1 = std::min(b1, s0 + tc.chunk_scenes);
        for (int s = s0; s < s1; ++s) {
          const int idx = order[static_cast<std::size_t>(s)];
          const model::SceneInput in = model::make_input(data.train_n[static_cast<std::size_t>(idx)]);
          Rng drop = Rng::substream(cfg.seed, "dropout",
                                    static_cast<std::uint64_t>(epoch) * 1000003u +
                                        static_cast<std::uint64_t>(s));
          num::Tape tape;
          num::ParamBinder bind(tape, &buf);
          const model::ForwardResult r = model->forward(bind, in, &drop);
          // Batch loss is the mean of per-scene losses.
          num::Var loss = num::scale(model::nll_loss(r.gauss, in.y, in.pad).total,
                                     num::Real(1) / static_cast<num::Real>(bsize));
          tape.backward(loss);
          chunk_loss += static_cast<double>(loss.value().item()) * bsize;
        }
        chunks.loss[static_cast<std::size_t>(c)] = chunk_loss;
      });

      for (auto& p : params) {
        p.grad = chunks.buffers[0][p.index];
        for (int c = 1; c < n_chunks; ++c) p.grad.add_(chunks.buffers[static_cast<std::size_t>(c)][p.index]);
      }
      for (int c = 0; c < n_chunks; ++c) loss_sum += chunks.loss[static_cast<std::size_t>(c)];
      if (!std::isfinite(loss_sum)) throw NumericalError("training loss became non-finite");
      num::adamw_step(params, adam, lr);
    }

    EpochLog log;
    log.epoch = epoch + 1;
    log.lr = lr;
    log.train_nll = loss_sum / n_train;
    log.val_nll = evaluate_nll(*model, val, tc.device_threads);
    if (!std::isfinite(log.val_nll)) throw NumericalError("validation loss became non-finite");
    log.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    TrainState& st = result.state;
    st.epoch = epoch + 1;
    const bool improved = log.val_nll < st.best_val;
    if (improved) {
      st.best_val = log.val_nll;
      st.best_epoch = st.epoch;
      st.bad_epochs = 0;
    } else {
      ++st.bad_epochs;
    }
    const eval::MlrModel* mlr_ptr = mlr ? &*mlr : nullptr;
    if (improved && !options.checkpoint.empty()) {
      save_checkpoint(options.checkpoint, cfg, data.stats, st, *model, nullptr, mlr_ptr);
    }
    if (!options.checkpoint.empty()) {
      save_checkpoint(last, cfg, data.stats, st, *model, &adam, mlr_ptr);
    }
    if (!options.log.empty()) append_log(options.log, log);
    result.epochs.push_back(log);
    if (options.on_epoch) options.on_epoch(log);

    if (tc.patience > 0 && st.bad_epochs >= tc.patience) {
      result.early_stopped = true;
      break;
    }
  }
  result.model = std::move(model);
  return result;
}

}  // namespace ltp::app
