#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resperf/layer_config.hpp"
#include "resperf/model.hpp"
#include "resperf/trainer.hpp"

namespace resperf::cli {

struct GenOptions {
  LayerKind kind = LayerKind::Convolution;
  std::size_t n = 5000;
  std::uint64_t seed = 42;
  std::string profile = "gtx1080ti";
  std::optional<double> noise;
  std::string out;
};

struct TrainOptions {
  std::string data;
  PhaseKind phase = PhaseKind::Execution;
  ModelType model = ModelType::ResPerfNet;
  Hyperparams hp;
  std::string out;
  std::string history;  // defaults to <out>.history.csv
  bool verbose = false;
};

struct EvalOptions {
  std::string models;
  std::vector<std::string> data;
  std::string report;  // per-row CSV, optional
};

struct PredictOptions {
  std::string models;
  std::string network;
  std::vector<int> batches;
  std::string out;  // breakdown CSV, optional
};

/// Each returns the process exit code; errors propagate as exceptions.
int run_gen(const GenOptions& opt, const std::vector<std::string>& argv);
int run_train(const TrainOptions& opt, const std::vector<std::string>& argv);
int run_eval(const EvalOptions& opt, const std::vector<std::string>& argv);
int run_predict(const PredictOptions& opt, const std::vector<std::string>& argv);

/// A file path, or a name looked up as <dir>/networks/<name>.json where dir is
/// $RESPERF_FIXTURE_DIR or the installed fixture directory.
std::string resolve_network_path(const std::string& spec);

}  // namespace resperf::cli
