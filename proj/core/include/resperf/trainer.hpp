#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "resperf/dataset.hpp"
#include "resperf/network.hpp"
#include "resperf/transforms.hpp"

namespace resperf {

/// Training settings. Defaults are the reference configuration.
struct Hyperparams {
  int total_epochs = 200;
  double lr = 0.1;
  std::size_t batch_size = 128;
  int decay_period = 40;  // epochs between learning-rate decays
  double decay_factor = 0.5;
  double l2 = 0.1;
  double scaler = 10.0;
  std::uint64_t seed = 42;
  bool boxcox = true;
  double split_ratio = 0.8;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;

  /// Empty when usable.
  std::vector<std::string> problems() const;

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

/// log(1 + t) below this rejects a target as unusable for MAPLE.
inline constexpr double kMapleTargetFloor = 1e-6;

struct MapleResult {
  double loss = 0.0;
  std::vector<double> grad;  // dL/dy_i of the data term
};

/// Mean absolute percentage logarithmic error plus l2 * weight_squared_norm:
///   (1/n) sum |log(1+y_i) - log(1+t_i)| / log(1+t_i) + l2 * ||w||^2
/// Throws std::domain_error for y_i <= -1 and std::invalid_argument for a
/// target with log(1+t_i) < kMapleTargetFloor.
MapleResult maple_loss(std::span<const double> predictions, std::span<const double> targets,
                       double weight_squared_norm, double l2);

/// Step decay: lr0 * factor^floor(epoch / period).
double lr_at(int epoch, double lr0, int period, double factor);

struct DatasetSplit {
  Dataset train;
  Dataset test;
};

/// Shuffles row indices with `seed` and puts the first floor(ratio * m) in
/// the training split.
DatasetSplit split_dataset(const Dataset& ds, double ratio, std::uint64_t seed);

/// Number of mini-batches in one epoch: ceil(m / bs).
std::size_t batches_per_epoch(std::size_t rows, std::size_t batch_size);

/// Adam over every parameter tensor of a network. The l2 term enters the
/// gradient of weights (not biases) as 2 * l2 * w.
class AdamOptimizer {
 public:
  AdamOptimizer(const Network& net, double beta1, double beta2, double epsilon);
  void step(Network& net, const Gradients& grads, double lr, double l2);
  std::uint64_t steps() const { return t_; }

 private:
  double beta1_, beta2_, epsilon_;
  std::uint64_t t_ = 0;
  Gradients m_, v_;
};

struct EpochRecord {
  int epoch = 0;
  double lr = 0.0;
  double train_maple = 0.0;  // running mean of the data term over the epoch
  double test_maple = 0.0;
  double test_mape = 0.0;  // percent, on unscaled times
  double test_rmse = 0.0;  // ms

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Preprocessed training and held-out data for one (kind, phase).
struct PreparedData {
  TransformerState transform;
  Tensor train_x;
  std::vector<double> train_t;  // scaled
  Tensor test_x;
  std::vector<double> test_t;  // scaled
};

/// Splits, fits the pipeline on the training split and transforms both splits.
PreparedData prepare_data(const Dataset& ds, PhaseKind phase, const Hyperparams& hp);

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Runs the mini-batch loop: per epoch, set lr by step decay, reshuffle the
/// training rows, take ceil(m / bs) Adam steps on MAPLE (predictions below 0
/// are clamped to 0 for the loss, gradient passed straight through), then
/// record train/test errors. Throws TrainingError on a non-finite loss.
std::vector<EpochRecord> fit_network(Network& net, const PreparedData& data,
                                     const Hyperparams& hp, const EpochCallback& on_epoch = {});

/// Scaled predictions for already-transformed rows, infer mode.
std::vector<double> predict_scaled(const Network& net, const Tensor& x);

}  // namespace resperf
