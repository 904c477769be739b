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
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "ltp/geo/io.hpp"
#include "test_support.hpp"

namespace ltp {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::read_file;
using testing::TempDir;

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

RunResult run(const std::string& args, const TempDir& dir) {
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + LTP_CLI_PATH + "\" " + args + " >\"" + out.string() +
                          "\" 2>\"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_file(out);
  r.err = read_file(err);
  return r;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

std::vector<json> read_jsonl(const fs::path& p) {
  std::ifstream f(p);
  std::vector<json> rows;
  std::string line;
  while (std::getline(f, line)) {
    if (!line.empty()) rows.push_back(json::parse(line));
  }
  return rows;
}

constexpr const char* kTinyToml = R"(seed = 5
[data]
flights_per_group = 15
[model]
model_dim = 16
heads_mma = 2
heads_aa = 2
ffn_dim = 32
gpd_hidden = [16, 8, 4]
[train]
epochs = 1
batch_scenes = 8
chunk_scenes = 4
max_train_scenes = 24
)";

// One small corpus, split and model shared by the tests below.
class CliPipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = std::make_unique<TempDir>();
    std::ofstream(*dir_ / "tiny.toml") << kTinyToml;
    const auto& d = *dir_;
    ASSERT_EQ(run("gen-data --out " + q(d / "tracks.csv") + " --flights 150 --seed 3", d).code, 0);
    ASSERT_EQ(run("preprocess --config " + q(d / "tiny.toml") + " --tracks " + q(d / "tracks.csv") +
                      " --out " + q(d / "data"),
                  d)
                  .code,
              0);
    ASSERT_EQ(run("train --quiet --config " + q(d / "tiny.toml") + " --tracks " +
                      q(d / "tracks.csv") + " --out " + q(d / "model.ckpt"),
                  d)
                  .code,
              0);
  }
  static void TearDownTestSuite() { dir_.reset(); }

  static const TempDir& dir() { return *dir_; }

  static std::unique_ptr<TempDir> dir_;
};

std::unique_ptr<TempDir> CliPipeline::dir_;

TEST(Cli, HelpAndUsageErrors) {
  TempDir d;
  EXPECT_EQ(run("--help", d).code, 0);
  EXPECT_EQ(run("no-such-command", d).code, 2);
  EXPECT_EQ(run("gen-data", d).code, 2);  // --out missing
  EXPECT_EQ(run("train --epochs 3", d).code, 2);
}

TEST(Cli, GenDataIsDeterministicAndParses) {
  TempDir d;
  ASSERT_EQ(run("gen-data --out " + q(d / "a.csv") + " --flights 200 --seed 11", d).code, 0);
  ASSERT_EQ(run("gen-data --out " + q(d / "b.csv") + " --flights 200 --seed 11", d).code, 0);
  ASSERT_EQ(run("gen-data --out " + q(d / "c.csv") + " --flights 200 --seed 12", d).code, 0);
  EXPECT_EQ(read_file(d / "a.csv"), read_file(d / "b.csv"));
  EXPECT_NE(read_file(d / "a.csv"), read_file(d / "c.csv"));
  EXPECT_EQ(geo::read_tracks(d / "a.csv").size(), 200u);
}

TEST(Cli, SaturatingRateWarnsButSucceeds) {
  TempDir d;
  const RunResult r = run("gen-data --out " + q(d / "t.csv") + " --flights 60 --rate 100", d);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST(Cli, UnwritableOutputIsUsageError) {
  TempDir d;
  const RunResult r = run("gen-data --out /nonexistent-dir/x/tracks.csv --flights 5", d);
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, DivergentTrainingExitsWithNumericalCode) {
  TempDir d;
  std::ofstream(d / "bad.toml") << kTinyToml << "[optim]\nlr_max = 1e30\nlr_min = 1e29\n";
  ASSERT_EQ(run("gen-data --out " + q(d / "t.csv") + " --flights 150 --seed 3", d).code, 0);
  const RunResult r = run("train --quiet --config " + q(d / "bad.toml") + " --tracks " +
                              q(d / "t.csv") + " --out " + q(d / "m.ckpt") + " --epochs 3",
                          d);
  EXPECT_EQ(r.code, 3) << r.err;
}

TEST_F(CliPipeline, PreprocessWritesSplits) {
  for (const char* name : {"train.jsonl", "val.jsonl", "test.jsonl", "norm_stats.json"}) {
    EXPECT_TRUE(fs::exists(dir() / "data" / name)) << name;
  }
  EXPECT_FALSE(geo::read_scenes(dir() / "data" / "test.jsonl").empty());
}

TEST_F(CliPipeline, TrainLogHasOneRowPerEpoch) {
  std::ifstream f(dir() / "model.ckpt.csv");
  std::string line;
  int rows = 0;
  while (std::getline(f, line)) rows += !line.empty();
  EXPECT_EQ(rows, 2);  // header + one epoch
  EXPECT_TRUE(fs::exists(dir() / "model.ckpt.last"));
  const RunResult r = run("inspect-checkpoint " + q(dir() / "model.ckpt"), dir());
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("baseline"), std::string::npos);
}

TEST_F(CliPipeline, PredictRowsMatchScenes) {
  const auto& d = dir();
  const fs::path scenes = d / "data" / "test.jsonl";
  ASSERT_EQ(run("predict --checkpoint " + q(d / "model.ckpt") + " --scenes " + q(scenes) +
                    " --out " + q(d / "p1.jsonl"),
                d)
                .code,
            0);
  ASSERT_EQ(run("predict --checkpoint " + q(d / "model.ckpt") + " --scenes " + q(scenes) +
                    " --out " + q(d / "p2.jsonl") + " --device-threads 2",
                d)
                .code,
            0);
  EXPECT_EQ(read_file(d / "p1.jsonl"), read_file(d / "p2.jsonl"));

  std::size_t agents = 0;
  for (const auto& s : geo::read_scenes(scenes)) agents += s.agents.size();
  const auto rows = read_jsonl(d / "p1.jsonl");
  ASSERT_EQ(rows.size(), agents);
  for (const auto& r : rows) {
    EXPECT_NEAR(r.at("landing_time_s").get<double>(),
                r.at("t_end").get<double>() + r.at("mu_s").get<double>(), 1e-6);
    EXPECT_GT(r.at("sigma_s").get<double>(), 0.0);
  }
}

TEST_F(CliPipeline, MlrPredictionsHaveNoSigma) {
  const auto& d = dir();
  ASSERT_EQ(run("predict --model mlr --checkpoint " + q(d / "model.ckpt") + " --scenes " +
                    q(d / "data" / "test.jsonl") + " --out " + q(d / "mlr.jsonl"),
                d)
                .code,
            0);
  for (const auto& r : read_jsonl(d / "mlr.jsonl")) EXPECT_TRUE(r.at("sigma_s").is_null());
  EXPECT_EQ(run("predict --model xgb --checkpoint " + q(d / "model.ckpt") + " --scenes " +
                    q(d / "data" / "test.jsonl") + " --out " + q(d / "x.jsonl"),
                d)
                .code,
            2);
}

// Perfect predictions, built straight from the labels.
fs::path write_oracle_predictions(const fs::path& labels, const fs::path& out) {
  std::ofstream f(out);
  for (const auto& s : geo::read_scenes(labels)) {
    for (const auto& a : s.agents) {
      f << json{{"scene_id", s.scene_id},
                {"callsign", a.callsign},
                {"t_end", s.t_end},
                {"mu_s", a.remaining_s},
                {"sigma_s", 10.0},
                {"landing_time_s", s.t_end + a.remaining_s},
                {"y_true_s", a.remaining_s}}
               .dump()
        << '\n';
    }
  }
  return out;
}

TEST_F(CliPipeline, EvaluatePerfectPredictions) {
  const auto& d = dir();
  const fs::path labels = d / "data" / "test.jsonl";
  write_oracle_predictions(labels, d / "oracle.jsonl");
  const RunResult r = run("evaluate --predictions " + q(d / "oracle.jsonl") + " --labels " +
                              q(labels) + " --out " + q(d / "report.json"),
                          d);
  ASSERT_EQ(r.code, 0) << r.err;
  const json rep = json::parse(read_file(d / "report.json"));
  EXPECT_DOUBLE_EQ(rep.at("model").at("mae_s").get<double>(), 0.0);
  EXPECT_DOUBLE_EQ(rep.at("model").at("spearman_rho").get<double>(), 1.0);
  EXPECT_TRUE(rep.at("baseline").is_null());
}

TEST_F(CliPipeline, EvaluateWithBaselineMatchesSchema) {
  const auto& d = dir();
  const fs::path labels = d / "data" / "test.jsonl";
  ASSERT_EQ(run("predict --checkpoint " + q(d / "model.ckpt") + " --scenes " + q(labels) +
                    " --out " + q(d / "net.jsonl"),
                d)
                .code,
            0);
  ASSERT_EQ(run("predict --model mlr --checkpoint " + q(d / "model.ckpt") + " --scenes " +
                    q(labels) + " --out " + q(d / "base.jsonl"),
                d)
                .code,
            0);
  const RunResult r = run("evaluate --predictions " + q(d / "net.jsonl") + " --baseline " +
                              q(d / "base.jsonl") + " --labels " + q(labels) + " --out " +
                              q(d / "cmp.json"),
                          d);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("PI (%)"), std::string::npos);
  const json rep = json::parse(read_file(d / "cmp.json"));
  EXPECT_TRUE(rep.at("baseline").is_object());
  EXPECT_TRUE(rep.at("improvement_pct").is_object());

  if (std::system("python3 -c 'import jsonschema' >/dev/null 2>&1") != 0) {
    GTEST_SKIP() << "python3 jsonschema not available";
  }
  const std::string check = "python3 -c 'import json,sys,jsonschema; "
                            "jsonschema.validate(json.load(open(sys.argv[1])), json.load(open(sys.argv[2])))' " +
                            q(d / "cmp.json") + " " + q(fs::path(LTP_SCHEMA_DIR) / "eval_report.schema.json");
  EXPECT_EQ(std::system(check.c_str()), 0);
}

TEST_F(CliPipeline, EvaluateRejectsMisalignedIds) {
  const auto& d = dir();
  const fs::path labels = d / "data" / "test.jsonl";
  write_oracle_predictions(labels, d / "full.jsonl");
  // Drop the last row.
  std::string text = read_file(d / "full.jsonl");
  text.erase(text.rfind('\n', text.size() - 2) + 1);
  std::ofstream(d / "short.jsonl") << text;
  const RunResult r =
      run("evaluate --predictions " + q(d / "short.jsonl") + " --labels " + q(labels), d);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("missing prediction"), std::string::npos);
}

TEST_F(CliPipeline, ExportAttentionIsRowStochastic) {
  const auto& d = dir();
  const auto all = geo::read_scenes(d / "data" / "test.jsonl");
  ASSERT_GE(all.size(), 5u);
  const std::vector<geo::Scene> five(all.begin(), all.begin() + 5);
  geo::write_scenes(d / "five.jsonl", five);
  ASSERT_EQ(run("export-attention --checkpoint " + q(d / "model.ckpt") + " --scenes " +
                    q(d / "five.jsonl") + " --out " + q(d / "attn.jsonl"),
                d)
                .code,
            0);
  const auto rows = read_jsonl(d / "attn.jsonl");
  ASSERT_EQ(rows.size(), 15u);  // 3 layers x 5 scenes
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& sc = five[i / 3];
    const auto& r = rows[i];
    EXPECT_EQ(r.at("scene_id"), sc.scene_id);
    EXPECT_EQ(r.at("layer").get<int>(), static_cast<int>(i % 3) + 1);
    const auto names = r.at("callsigns").get<std::vector<std::string>>();
    ASSERT_EQ(names.size(), sc.agents.size());
    for (std::size_t a = 0; a < names.size(); ++a) EXPECT_EQ(names[a], sc.agents[a].callsign);
    const auto m = r.at("scores").get<std::vector<std::vector<double>>>();
    ASSERT_EQ(m.size(), names.size());
    for (const auto& row : m) {
      double sum = 0.0;
      for (double v : row) {
        EXPECT_GE(v, 0.0);
        sum += v;
      }
      EXPECT_NEAR(sum, 1.0, 1e-5);
    }
  }
}

TEST(Cli, EndToEndRunsAreByteIdentical) {
  TempDir d;
  std::ofstream(d / "tiny.toml") << kTinyToml;
  for (const char* tag : {"a", "b"}) {
    const fs::path run_dir = d / tag;
    fs::create_directories(run_dir);
    ASSERT_EQ(run("gen-data --out " + q(run_dir / "t.csv") + " --flights 150 --seed 3", d).code, 0);
    ASSERT_EQ(run("preprocess --config " + q(d / "tiny.toml") + " --tracks " +
                      q(run_dir / "t.csv") + " --out " + q(run_dir / "data"),
                  d)
                  .code,
              0);
    ASSERT_EQ(run("train --quiet --epochs 2 --config " + q(d / "tiny.toml") + " --tracks " +
                      q(run_dir / "t.csv") + " --out " + q(run_dir / "m.ckpt"),
                  d)
                  .code,
              0);
    ASSERT_EQ(run("predict --checkpoint " + q(run_dir / "m.ckpt") + " --scenes " +
                      q(run_dir / "data" / "test.jsonl") + " --out " + q(run_dir / "p.jsonl"),
                  d)
                  .code,
              0);
  }
  for (const char* f : {"m.ckpt", "m.ckpt.last", "p.jsonl", "data/test.jsonl"}) {
    EXPECT_EQ(read_file(d / "a" / f), read_file(d / "b" / f)) << f;
  }
}

}  // namespace
}  // namespace ltp
