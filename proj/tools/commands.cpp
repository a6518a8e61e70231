#include "commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "manifest.hpp"
#include "resperf/baselines.hpp"
#include "resperf/dataset.hpp"
#include "resperf/device_profile.hpp"
#include "resperf/metrics.hpp"
#include "resperf/model_io.hpp"
#include "resperf/predictor.hpp"
#include "resperf/synth_bench.hpp"
#include "resperf/text_util.hpp"

namespace fs = std::filesystem;

namespace resperf::cli {

namespace {

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

// Creates missing parent directories so an unwritable path fails before any work.
void prepare_output(const fs::path& path) {
  if (path.empty() || !path.has_parent_path()) return;
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw std::runtime_error("cannot create " + path.parent_path().string() + ": " + ec.message());
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_history(const fs::path& path, const std::vector<EpochRecord>& history) {
  auto out = open_output(path);
  out << "epoch,lr,train_maple,test_maple,test_mape,test_rmse\n";
  for (const auto& r : history) {
    out << r.epoch << ',' << format_double(r.lr) << ',' << format_double(r.train_maple) << ','
        << format_double(r.test_maple) << ',' << format_double(r.test_mape) << ','
        << format_double(r.test_rmse) << '\n';
  }
}

}  // namespace

std::string resolve_network_path(const std::string& spec) {
  if (fs::is_regular_file(spec)) return spec;
  const fs::path candidate =
      fs::path(env_or("RESPERF_FIXTURE_DIR", RESPERF_FIXTURE_DIR)) / "networks" / (spec + ".json");
  if (fs::is_regular_file(candidate)) return candidate.string();
  throw std::runtime_error("no network description '" + spec + "' (looked for " + candidate.string() + ")");
}

int run_gen(const GenOptions& opt, const std::vector<std::string>& argv) {
  RunManifest manifest("gen", argv);
  prepare_output(opt.out);
  manifest.set_seed(opt.seed);
  const auto dir = env_or("RESPERF_PROFILE_DIR", "");
  auto profile = resolve_device_profile(
      opt.profile, dir.empty() ? std::nullopt : std::optional<fs::path>(dir));
  if (opt.noise) {
    profile.noise_sigma = *opt.noise;
    if (auto errs = profile.problems(); !errs.empty()) throw std::invalid_argument(errs.front());
  }
  const auto ds = generate_dataset(opt.kind, opt.n, opt.seed, profile);
  save_dataset(ds, opt.out);
  const auto hash = fnv1a_hex(read_file(opt.out));
  manifest.add_output(opt.out);
  manifest.note("profile", profile.name);
  manifest.note("noise_sigma", format_double(profile.noise_sigma));
  manifest.note("fnv1a", hash);
  manifest.write(opt.out);
  std::cout << "wrote " << ds.size() << " " << to_string(opt.kind) << " rows to " << opt.out
            << " (fnv1a " << hash << ")\n";
  return 0;
}

int run_train(const TrainOptions& opt, const std::vector<std::string>& argv) {
  RunManifest manifest("train", argv);
  prepare_output(opt.out);
  if (!opt.history.empty()) prepare_output(opt.history);
  manifest.set_seed(opt.hp.seed);
  manifest.add_input(opt.data);
  const auto ds = load_dataset(opt.data);

  EpochCallback progress;
  if (opt.verbose) {
    progress = [](const EpochRecord& r) {
      std::fprintf(stderr, "epoch %3d  lr %-8g train MAPLE %.5f  test MAPE %.3f%%  test RMSE %.5g ms\n",
                   r.epoch, r.lr, r.train_maple, r.test_mape, r.test_rmse);
    };
  }
  TrainedPhaseModel model;
  switch (opt.model) {
    case ModelType::ResPerfNet: model = train(ds, opt.phase, opt.hp, progress); break;
    case ModelType::Mlp: model = train_mlp(ds, opt.phase, opt.hp, progress); break;
    case ModelType::Poly: model = train_poly(ds, opt.phase, opt.hp); break;
  }
  save_model(model, opt.out);
  manifest.add_output(opt.out);

  const std::string history = opt.history.empty() ? opt.out + ".history.csv" : opt.history;
  if (!model.history.empty()) {
    write_history(history, model.history);
    manifest.add_output(history);
  }

  // Held-out metrics on unscaled times, for every model type.
  const auto split = split_dataset(ds, opt.hp.split_ratio, opt.hp.seed);
  auto pred = model.predict_raw(split.test.features());
  for (auto& v : pred) v = std::max(v, 0.0);
  const auto m = evaluate(pred, split.test.targets(opt.phase));
  manifest.note("test_mape", format_double(m.mape));
  manifest.write(opt.out);
  std::printf("%s %s/%s: test MAPE %.3f%%  RMSE %.5g ms  MAE %.5g ms  R2 %.4f  (%zu held-out rows)\n",
              std::string(to_string(opt.model)).c_str(), std::string(to_string(ds.kind)).c_str(),
              std::string(to_string(opt.phase)).c_str(), m.mape, m.rmse, m.mae, m.r2,
              split.test.size());
  return 0;
}

int run_eval(const EvalOptions& opt, const std::vector<std::string>& argv) {
  RunManifest manifest("eval", argv);
  const auto bundle = load_bundle(opt.models);
  std::ofstream report;
  if (!opt.report.empty()) {
    prepare_output(opt.report);
    report = open_output(opt.report);
    report << "dataset,row,kind,phase,predicted_ms,actual_ms\n";
  }

  std::printf("%-6s %-6s %10s %12s %12s %8s %8s\n", "Layer", "Phase", "MAPE(%)", "RMSE(ms)",
              "MAE(ms)", "R2", "clamped");
  for (const auto& path : opt.data) {
    manifest.add_input(path);
    const auto ds = load_dataset(path);
    if (auto gaps = bundle.missing({ds.kind}); !gaps.empty()) throw MissingModel(std::move(gaps));
    const auto features = ds.features();
    for (auto phase : kAllPhaseKinds) {
      auto pred = bundle.at(ds.kind, phase).predict_raw(features);
      std::size_t clamped = 0;
      for (auto& v : pred) {
        if (v < 0.0) {
          v = 0.0;
          ++clamped;
        }
      }
      const auto actual = ds.targets(phase);
      const auto m = evaluate(pred, actual);
      std::printf("%-6s %-6s %10.3f %12.5g %12.5g %8.4f %8zu\n",
                  std::string(to_string(ds.kind)).c_str(), std::string(to_string(phase)).c_str(),
                  m.mape, m.rmse, m.mae, m.r2, clamped);
      if (report.is_open()) {
        for (std::size_t i = 0; i < pred.size(); ++i) {
          report << path << ',' << i << ',' << to_string(ds.kind) << ',' << to_string(phase) << ','
                 << format_double(pred[i]) << ',' << format_double(actual[i]) << '\n';
        }
      }
    }
  }
  if (!opt.report.empty()) {
    manifest.add_output(opt.report);
    manifest.write(opt.report);
  }
  return 0;
}

int run_predict(const PredictOptions& opt, const std::vector<std::string>& argv) {
  RunManifest manifest("predict", argv);
  const auto bundle = load_bundle(opt.models);
  const auto path = resolve_network_path(opt.network);
  manifest.add_input(path);
  const auto desc = load_network_description(path);

  std::ofstream breakdown;
  if (!opt.out.empty()) {
    prepare_output(opt.out);
    breakdown = open_output(opt.out);
    breakdown << "network,batch,layer,kind,phase,ms\n";
  }
  ClampCounter clamps;
  std::printf("%s (%zu layers)\n%8s %14s\n", desc.name.c_str(), desc.layers.size(), "batch", "total_ms");
  const std::vector<int> batches = opt.batches.empty() ? std::vector<int>{desc.layers.front().batch_size}
                                                       : opt.batches;
  for (int b : batches) {
    const auto at_batch = desc.with_batch(b);
    const auto pred = predict_network(bundle, at_batch, &clamps);
    std::printf("%8d %14.6g\n", b, pred.total);
    if (breakdown.is_open()) {
      for (const auto& t : pred.terms) {
        breakdown << desc.name << ',' << b << ',' << t.layer << ','
                  << to_string(at_batch.layers[t.layer].kind) << ',' << to_string(t.phase) << ','
                  << format_double(t.ms) << '\n';
      }
      breakdown << desc.name << ',' << b << ",total,,," << format_double(pred.total) << '\n';
    }
  }
  if (clamps.count > 0) {
    std::printf("note: %zu negative phase predictions clamped to 0 ms\n", clamps.count.load());
  }
  if (!opt.out.empty()) {
    manifest.add_output(opt.out);
    manifest.note("clamped_predictions", std::to_string(clamps.count.load()));
    manifest.write(opt.out);
  }
  return 0;
}

}  // namespace resperf::cli
