#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "resperf/random.hpp"
#include "resperf/tensor.hpp"

namespace resperf {

enum class OpKind : std::uint8_t { Conv1D, Dense, ReLU, Add, Dropout, Flatten };

std::string_view to_string(OpKind op);

/// One node of a sequential graph. Layer i consumes the output of layer i-1
/// (the network input for i = 0). Add additionally sums the output of layer
/// `source`, which must precede it and have the same shape.
struct LayerSpec {
  OpKind op = OpKind::ReLU;
  std::size_t units = 0;   // Conv1D filters or Dense width
  std::size_t kernel = 0;  // Conv1D only; odd, stride 1, same padding
  std::size_t source = 0;  // Add only
  double rate = 0.0;       // Dropout only

  static LayerSpec conv1d(std::size_t filters, std::size_t kernel = 3);
  static LayerSpec dense(std::size_t units);
  static LayerSpec relu();
  static LayerSpec add(std::size_t source);
  static LayerSpec dropout(double rate);
  static LayerSpec flatten();

  bool has_params() const { return op == OpKind::Conv1D || op == OpKind::Dense; }

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// Weight and bias of a parametric layer; both empty otherwise.
/// Conv1D weight is {kernel, channels_in, filters}; Dense weight is {in, out}.
struct LayerParams {
  Tensor weight;
  Tensor bias;

  friend bool operator==(const LayerParams&, const LayerParams&) = default;
};

using Gradients = std::vector<LayerParams>;

enum class Mode : std::uint8_t { Train, Infer };

struct LayerCensus {
  std::size_t conv = 0;
  std::size_t add = 0;
  std::size_t dense = 0;
  std::size_t dropout = 0;
  std::size_t relu = 0;
  std::size_t flatten = 0;
};

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Activations recorded by a forward pass, consumed by backward.
struct ForwardCache {
  Tensor input;
  std::vector<Tensor> outputs;
  std::vector<Tensor> dropout_masks;
  Mode mode = Mode::Infer;
  const void* owner = nullptr;
  std::uint64_t revision = 0;
};

/// A small feed-forward graph with reverse-mode gradients.
class Network {
 public:
  Network() = default;
  /// He-uniform weights drawn from `seed`, zero biases.
  Network(std::vector<LayerSpec> specs, Tensor::Shape input_shape, std::uint64_t seed);
  /// Restores a network from stored parameters.
  Network(std::vector<LayerSpec> specs, Tensor::Shape input_shape, std::vector<LayerParams> params);

  const std::vector<LayerSpec>& specs() const { return specs_; }
  const Tensor::Shape& input_shape() const { return input_shape_; }
  /// Output shape of layer i, excluding the batch dimension.
  const Tensor::Shape& layer_shape(std::size_t i) const { return shapes_.at(i); }
  std::size_t input_length() const { return shape_product(input_shape_); }

  const std::vector<LayerParams>& params() const { return params_; }
  /// Any cache recorded before this call is rejected by backward afterwards.
  std::vector<LayerParams>& mutable_params();

  std::size_t parameter_count() const;
  /// Sum of squared weights (biases excluded).
  double weight_squared_norm() const;
  LayerCensus census() const;

  /// `batch` is {n, input_length()} or {n, input_shape...}. Returns {n, 1} for
  /// a scalar head. Dropout draws from `dropout_stream` in train mode and is
  /// the identity in infer mode.
  Tensor forward(const Tensor& batch, Mode mode, RandomStream* dropout_stream = nullptr,
                 ForwardCache* cache = nullptr) const;

  /// Exact gradients of sum(output * output_grad) with respect to every
  /// parameter, given the cache of a train-mode forward on this network.
  Gradients backward(const ForwardCache& cache, const Tensor& output_grad,
                     Tensor* input_grad = nullptr) const;

  Gradients zero_gradients() const;

 private:
  void infer_shapes();

  std::vector<LayerSpec> specs_;
  Tensor::Shape input_shape_;
  std::vector<Tensor::Shape> shapes_;
  std::vector<LayerParams> params_;
  std::uint64_t revision_ = 0;
};

/// The residual regression network: three groups of
/// [head conv; 2 x (conv, conv, add)] with 128/64/32 filters, then three
/// Dense(128) layers, Dropout(0.2) and a single-unit output.
///
/// Activation placement: ReLU after every convolution except the second of a
/// residual block, whose sum with the shortcut is followed by ReLU; ReLU after
/// each hidden Dense.
struct ResPerfNetShape {
  std::size_t group1 = 128;
  std::size_t group2 = 64;
  std::size_t group3 = 32;
  std::size_t dense_width = 128;
  double dropout = 0.2;
};

std::vector<LayerSpec> resperfnet_specs(const ResPerfNetShape& shape = {});
Network build_resperfnet(std::size_t feature_count, std::uint64_t seed,
                         const ResPerfNetShape& shape = {});

/// Fully-connected baseline: p -> 128 -> 128 -> 128 -> Dropout -> 1.
std::vector<LayerSpec> mlp_specs(std::size_t width = 128, double dropout = 0.2);
Network build_mlp(std::size_t feature_count, std::uint64_t seed, std::size_t width = 128,
                  double dropout = 0.2);

}  // namespace resperf
