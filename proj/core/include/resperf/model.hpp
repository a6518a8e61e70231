#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "resperf/dataset.hpp"
#include "resperf/layer_config.hpp"
#include "resperf/network.hpp"
#include "resperf/trainer.hpp"
#include "resperf/transforms.hpp"

namespace resperf {

enum class ModelType : std::uint8_t { ResPerfNet, Mlp, Poly };

std::string_view to_string(ModelType type);
std::optional<ModelType> parse_model_type(std::string_view text);

/// Ridge least squares over a polynomial expansion of transformed features.
struct PolyModel {
  int degree = 2;
  double ridge = 1e-6;
  /// Intercept first, then one weight per expanded feature.
  std::vector<double> coefficients;

  double predict(std::span<const double> row) const;

  friend bool operator==(const PolyModel&, const PolyModel&) = default;
};

/// Degree 1: x. Degree 2: x, then x_i * x_j for i <= j (squares included).
std::vector<double> expand_polynomial(std::span<const double> row, int degree);
std::size_t expanded_feature_count(std::size_t features, int degree);

/// A config of a different layer kind than the model was trained on.
class SchemaMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One trained predictor for a (layer kind, phase) pair.
struct TrainedPhaseModel {
  ModelType type = ModelType::ResPerfNet;
  LayerKind kind = LayerKind::Convolution;
  PhaseKind phase = PhaseKind::Execution;
  std::string schema_version{kSchemaVersion};
  Hyperparams hyperparams;
  TransformerState transform;
  Network network;  // empty for Poly
  PolyModel poly;   // unused unless Poly
  std::vector<EpochRecord> history;

  /// Model output in ms before any clamping; may be negative.
  double predict_raw(const LayerConfig& cfg) const;
  /// Same for every row of an {m, p} matrix of encoded (untransformed) features.
  std::vector<double> predict_raw(const Tensor& features) const;
};

/// Trains a ResPerfNet for one phase: split, fit the pipeline on the training
/// split, run fit_network for hp.total_epochs epochs.
TrainedPhaseModel train(const Dataset& ds, PhaseKind phase, const Hyperparams& hp,
                        const EpochCallback& on_epoch = {});

}  // namespace resperf
