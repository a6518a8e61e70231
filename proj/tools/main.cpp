#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"

using namespace resperf;

namespace {

template <typename Enum>
std::vector<std::string> names(std::initializer_list<Enum> values) {
  std::vector<std::string> out;
  for (auto v : values) out.emplace_back(to_string(v));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  CLI::App app{"Layer latency prediction with three-phase residual regression models"};
  app.set_version_flag("--version", RESPERF_VERSION);
  app.require_subcommand(1);

  const auto kinds = names({LayerKind::Convolution, LayerKind::Pooling, LayerKind::Dense});
  const auto phases = names({PhaseKind::Preprocess, PhaseKind::Execution, PhaseKind::Postprocess});
  const auto models = names({ModelType::ResPerfNet, ModelType::Mlp, ModelType::Poly});
  std::string kind_name, phase_name = "exe", model_name = "resperfnet";

  cli::GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic micro-benchmark dataset");
  gen_cmd->add_option("--kind", kind_name, "Layer kind")->required()->check(CLI::IsMember(kinds));
  gen_cmd->add_option("--n", gen.n, "Number of rows")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--profile", gen.profile, "Device preset name or profile file (see RESPERF_PROFILE_DIR)");
  gen_cmd->add_option("--noise", gen.noise, "Override the profile's log-normal noise sigma")
      ->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--out", gen.out, "Output CSV")->required();

  cli::TrainOptions tr;
  bool no_boxcox = false;
  auto* train_cmd = app.add_subcommand("train", "Train one phase model on a dataset");
  train_cmd->add_option("--data", tr.data, "Dataset CSV")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--phase", phase_name, "Phase to model")->check(CLI::IsMember(phases));
  train_cmd->add_option("--model", model_name, "Estimator")->check(CLI::IsMember(models));
  train_cmd->add_flag("--no-boxcox", no_boxcox, "Skip the Box-Cox feature transform");
  train_cmd->add_option("--epochs", tr.hp.total_epochs, "Total epochs")->check(CLI::PositiveNumber);
  train_cmd->add_option("--lr", tr.hp.lr, "Initial learning rate")->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--batch-size", tr.hp.batch_size, "Mini-batch size")->check(CLI::PositiveNumber);
  train_cmd->add_option("--decay-period", tr.hp.decay_period, "Epochs between learning-rate decays")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--decay-factor", tr.hp.decay_factor, "Learning-rate decay factor")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--l2", tr.hp.l2, "L2 weight penalty")->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--scaler", tr.hp.scaler, "Target multiplier")->check(CLI::PositiveNumber);
  train_cmd->add_option("--seed", tr.hp.seed, "Seed for split, init, shuffling and dropout");
  train_cmd->add_option("--adam-epsilon", tr.hp.adam_epsilon, "Adam denominator offset")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--out", tr.out, "Output model file (.json)")->required();
  train_cmd->add_option("--history", tr.history, "History CSV (default <out>.history.csv)");
  train_cmd->add_flag("-v,--verbose", tr.verbose, "Print every epoch");

  cli::EvalOptions ev;
  auto* eval_cmd = app.add_subcommand("eval", "Score a model directory against datasets");
  eval_cmd->add_option("--models", ev.models, "Directory of model files")->required()->check(CLI::ExistingDirectory);
  eval_cmd->add_option("--data", ev.data, "Dataset CSV (repeatable)")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--report", ev.report, "Per-row predicted vs actual CSV");

  cli::PredictOptions pr;
  auto* predict_cmd = app.add_subcommand("predict", "Predict end-to-end latency of a network");
  predict_cmd->add_option("--models", pr.models, "Directory of model files")->required()->check(CLI::ExistingDirectory);
  predict_cmd->add_option("--network", pr.network, "Description file or fixture name")->required();
  predict_cmd->add_option("--batches", pr.batches, "Comma-separated batch sizes")
      ->delimiter(',')->check(CLI::Range(1, 64));
  predict_cmd->add_option("--out", pr.out, "Per-term breakdown CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*gen_cmd) {
      gen.kind = *parse_layer_kind(kind_name);
      return cli::run_gen(gen, args);
    }
    if (*train_cmd) {
      tr.phase = *parse_phase_kind(phase_name);
      tr.model = *parse_model_type(model_name);
      tr.hp.boxcox = !no_boxcox;
      return cli::run_train(tr, args);
    }
    if (*eval_cmd) return cli::run_eval(ev, args);
    if (*predict_cmd) return cli::run_predict(pr, args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
