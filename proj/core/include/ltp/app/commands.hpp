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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>

namespace ltp::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

struct Console {
  std::ostream& out;
  std::ostream& err;
};

struct GenDataArgs {
  std::filesystem::path config;  // empty: built-in airspace
  std::filesystem::path out;
  std::uint64_t seed = 42;
  int flights = 500;
  double rate_per_hr = 20.0;
};

struct PreprocessArgs {
  std::filesystem::path config;
  std::filesystem::path tracks;
  std::filesystem::path out_dir;
  std::optional<std::uint64_t> seed;
};

struct TrainArgs {
  std::filesystem::path config;
  std::filesystem::path tracks;
  std::filesystem::path out;
  std::filesystem::path log;  // default: <out>.csv
  std::optional<std::uint64_t> seed;
  std::optional<int> epochs;
  std::optional<int> batch;
  std::optional<int> device_threads;
  std::optional<int> patience;
  std::optional<int> overfit_scenes;
  bool resume = false;
  bool quiet = false;
};

struct PredictArgs {
  std::filesystem::path checkpoint;
  std::filesystem::path scenes;
  std::filesystem::path out;
  /// "net" or the bundled single-agent baseline "mlr".
  std::string model = "net";
  int device_threads = 1;
};

struct EvaluateArgs {
  std::filesystem::path predictions;
  std::filesystem::path labels;
  std::filesystem::path baseline;  // optional second prediction file
  std::filesystem::path out;       // optional JSON report
};

struct ExportAttentionArgs {
  std::filesystem::path checkpoint;
  std::filesystem::path scenes;
  std::filesystem::path out;
};

int cmd_gen_data(const GenDataArgs& args, Console io);
int cmd_preprocess(const PreprocessArgs& args, Console io);
int cmd_train(const TrainArgs& args, Console io);
int cmd_predict(const PredictArgs& args, Console io);
int cmd_evaluate(const EvaluateArgs& args, Console io);
int cmd_export_attention(const ExportAttentionArgs& args, Console io);
int cmd_inspect_checkpoint(const std::filesystem::path& checkpoint, Console io);

/// Runs `fn`, translating library exceptions into exit codes: validation
/// and I/O problems give 2, numerical failures 3.
int run_guarded(const std::function<int()>& fn, std::ostream& err);

}  // namespace ltp::app
