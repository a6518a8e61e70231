#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "resperf/dataset.hpp"
#include "resperf/layer_config.hpp"
#include "resperf/tensor.hpp"

namespace resperf {

/// t * scaler for every element. Throws std::invalid_argument unless scaler > 0.
std::vector<double> scalar_multiply(std::span<const double> targets, double scaler);
/// t / scaler.
std::vector<double> scalar_divide(std::span<const double> targets, double scaler);

/// Box-Cox: (x^lambda - 1) / lambda, or ln x when |lambda| < 1e-8.
/// Throws std::domain_error for x <= 0.
double apply_boxcox(double x, double lambda);

/// Profile log-likelihood of the Box-Cox model at `lambda` (constants dropped):
/// -n/2 * ln(var of transformed column) + (lambda - 1) * sum ln x.
double boxcox_log_likelihood(std::span<const double> column, double lambda);

/// Maximum-likelihood lambda: best point of a 0.01 grid over [-3, 3], refined
/// by golden-section search to 1e-4. Throws std::invalid_argument for a
/// non-positive value or a column with fewer than two distinct values.
double fit_boxcox_lambda(std::span<const double> column);

/// Fitted feature/target preprocessing for one layer kind.
struct TransformerState {
  LayerKind kind = LayerKind::Convolution;
  std::string schema_version{kSchemaVersion};
  double scaler = 1.0;
  std::vector<double> mean;    // per schema feature, after Box-Cox
  std::vector<double> stddev;  // population; 1 for constant flag columns
  std::vector<Feature> boxcox_features;
  std::vector<double> boxcox_lambdas;  // parallel to boxcox_features
  bool fitted = false;

  std::vector<std::string> boxcox_feature_names() const;

  friend bool operator==(const TransformerState&, const TransformerState&) = default;
};

/// Features that receive Box-Cox for each kind: matrix and kernel size for
/// convolution, matrix size for pooling, none for dense.
std::vector<Feature> boxcox_features_for(LayerKind kind);

struct PipelineOptions {
  double scaler = 10.0;
  bool boxcox = true;
};

/// Fits Box-Cox lambdas, then Z-score statistics on the transformed training
/// features. A non-flag column with zero variance is an error.
TransformerState fit_pipeline(const Dataset& train, const PipelineOptions& options = {});
TransformerState fit_pipeline(LayerKind kind, const Tensor& features,
                              const PipelineOptions& options = {});

struct Transformed {
  Tensor features;
  std::vector<double> targets;  // empty when no targets were given
};

/// Applies stored lambdas and Z-score statistics to an {m, p} feature
/// matrix and scales the targets when present.
Transformed apply_pipeline(const TransformerState& state, const Tensor& features,
                           std::optional<std::span<const double>> targets = std::nullopt);
/// Single encoded feature vector.
std::vector<double> apply_pipeline_row(const TransformerState& state,
                                       std::span<const double> features);

/// Undoes the target scaling: y / scaler.
double invert_target(const TransformerState& state, double scaled);

}  // namespace resperf
