#include "resperf/predictor.hpp"

#include <algorithm>

#include "resperf/model_io.hpp"

namespace resperf {

namespace {

std::string describe(const std::vector<ModelBundle::Key>& missing) {
  std::string out = "missing models:";
  for (std::size_t i = 0; i < missing.size(); ++i) {
    out += (i == 0 ? " " : ", ");
    out += std::string(to_string(missing[i].first)) + "/" + std::string(to_string(missing[i].second));
  }
  return out;
}

}  // namespace

MissingModel::MissingModel(std::vector<ModelBundle::Key> missing)
    : std::runtime_error(describe(missing)), missing_(std::move(missing)) {}

void ModelBundle::add(TrainedPhaseModel model) {
  const Key key{model.kind, model.phase};
  models_.insert_or_assign(key, std::move(model));
}

bool ModelBundle::contains(LayerKind kind, PhaseKind phase) const {
  return models_.contains({kind, phase});
}

const TrainedPhaseModel& ModelBundle::at(LayerKind kind, PhaseKind phase) const {
  const auto it = models_.find({kind, phase});
  if (it == models_.end()) throw MissingModel({{kind, phase}});
  return it->second;
}

std::vector<ModelBundle::Key> ModelBundle::missing(const std::vector<LayerKind>& kinds) const {
  std::vector<Key> out;
  for (auto kind : kinds) {
    for (auto phase : kAllPhaseKinds) {
      if (!contains(kind, phase)) out.emplace_back(kind, phase);
    }
  }
  return out;
}

ModelBundle load_bundle(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw std::runtime_error("model directory " + dir.string() + " does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (!entry.is_regular_file() || !name.ends_with(".json") || name.ends_with(".manifest.json")) {
      continue;
    }
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  ModelBundle bundle;
  for (const auto& f : files) {
    auto model = load_model(f);
    if (bundle.contains(model.kind, model.phase)) {
      throw std::runtime_error("two models for " + std::string(to_string(model.kind)) + "/" +
                               std::string(to_string(model.phase)) + " in " + dir.string());
    }
    bundle.add(std::move(model));
  }
  return bundle;
}

double predict_phase(const ModelBundle& bundle, const LayerConfig& cfg, PhaseKind phase,
                     ClampCounter* clamps) {
  const double raw = bundle.at(cfg.kind, phase).predict_raw(cfg);
  if (raw < 0.0) {
    if (clamps) ++clamps->count;
    return 0.0;
  }
  return raw;
}

LayerPrediction predict_layer(const ModelBundle& bundle, const LayerConfig& cfg,
                              ClampCounter* clamps) {
  if (auto gaps = bundle.missing({cfg.kind}); !gaps.empty()) throw MissingModel(std::move(gaps));
  LayerPrediction out;
  out.times.t_pre = predict_phase(bundle, cfg, PhaseKind::Preprocess, clamps);
  out.times.t_exe = predict_phase(bundle, cfg, PhaseKind::Execution, clamps);
  out.times.t_post = predict_phase(bundle, cfg, PhaseKind::Postprocess, clamps);
  out.total = out.times.t_pre + out.times.t_exe + out.times.t_post;
  return out;
}

NetworkPrediction predict_network(const ModelBundle& bundle, const NetworkDescription& desc,
                                  ClampCounter* clamps) {
  if (desc.layers.empty()) throw std::invalid_argument("network description has no layers");
  std::vector<LayerKind> kinds;
  for (const auto& l : desc.layers) {
    if (std::find(kinds.begin(), kinds.end(), l.kind) == kinds.end()) kinds.push_back(l.kind);
  }
  if (auto gaps = bundle.missing(kinds); !gaps.empty()) throw MissingModel(std::move(gaps));

  NetworkPrediction out;
  const std::size_t last = desc.layers.size() - 1;
  out.terms.push_back({0, PhaseKind::Preprocess,
                       predict_phase(bundle, desc.layers.front(), PhaseKind::Preprocess, clamps)});
  for (std::size_t i = 0; i <= last; ++i) {
    out.terms.push_back(
        {i, PhaseKind::Execution, predict_phase(bundle, desc.layers[i], PhaseKind::Execution, clamps)});
  }
  out.terms.push_back({last, PhaseKind::Postprocess,
                       predict_phase(bundle, desc.layers.back(), PhaseKind::Postprocess, clamps)});
  for (const auto& t : out.terms) out.total += t.ms;
  return out;
}

}  // namespace resperf
