#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "resperf/model.hpp"
#include "resperf/network_description.hpp"

namespace resperf {

/// Trained phase models keyed by (layer kind, phase). Immutable once built.
class ModelBundle {
 public:
  using Key = std::pair<LayerKind, PhaseKind>;

  /// Replaces any model already stored for the same pair.
  void add(TrainedPhaseModel model);
  bool contains(LayerKind kind, PhaseKind phase) const;
  /// Throws MissingModel when absent.
  const TrainedPhaseModel& at(LayerKind kind, PhaseKind phase) const;
  /// Pairs not present among the three phases of each of `kinds`.
  std::vector<Key> missing(const std::vector<LayerKind>& kinds) const;
  std::size_t size() const { return models_.size(); }
  const std::map<Key, TrainedPhaseModel>& models() const { return models_; }

 private:
  std::map<Key, TrainedPhaseModel> models_;
};

/// Names every absent (kind, phase) pair, e.g. "missing models: conv/pre, pool/exe".
class MissingModel : public std::runtime_error {
 public:
  explicit MissingModel(std::vector<ModelBundle::Key> missing);
  const std::vector<ModelBundle::Key>& missing() const { return missing_; }

 private:
  std::vector<ModelBundle::Key> missing_;
};

/// Loads every `*.json` model document in `dir`, skipping `*.manifest.json`
/// run records. Two files for the same pair are an error.
ModelBundle load_bundle(const std::filesystem::path& dir);

/// Counts predictions whose raw output was negative and got clamped to 0.
struct ClampCounter {
  std::atomic<std::size_t> count{0};
};

double predict_phase(const ModelBundle& bundle, const LayerConfig& cfg, PhaseKind phase,
                     ClampCounter* clamps = nullptr);

struct LayerPrediction {
  PhaseTimes times;
  double total = 0.0;  // t_pre + t_exe + t_post
};

LayerPrediction predict_layer(const ModelBundle& bundle, const LayerConfig& cfg,
                              ClampCounter* clamps = nullptr);

struct BreakdownTerm {
  std::size_t layer = 0;
  PhaseKind phase = PhaseKind::Execution;
  double ms = 0.0;
};

struct NetworkPrediction {
  /// Preprocess of the first layer, execution of every layer in order,
  /// postprocess of the last layer.
  std::vector<BreakdownTerm> terms;
  double total = 0.0;  // sum of terms, accumulated in order
};

/// Inputs cross the host boundary only at the first layer and results only
/// at the last; interior layers contribute execution time.
NetworkPrediction predict_network(const ModelBundle& bundle, const NetworkDescription& desc,
                                  ClampCounter* clamps = nullptr);

}  // namespace resperf
