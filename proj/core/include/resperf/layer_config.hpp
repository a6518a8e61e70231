#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace resperf {

enum class LayerKind : std::uint8_t { Convolution, Pooling, Dense };
enum class PhaseKind : std::uint8_t { Preprocess, Execution, Postprocess };

inline constexpr std::array<LayerKind, 3> kAllLayerKinds = {
    LayerKind::Convolution, LayerKind::Pooling, LayerKind::Dense};
inline constexpr std::array<PhaseKind, 3> kAllPhaseKinds = {
    PhaseKind::Preprocess, PhaseKind::Execution, PhaseKind::Postprocess};

/// Short names used on the command line and in file headers: conv, pool, dense.
std::string_view to_string(LayerKind kind);
/// pre, exe, post.
std::string_view to_string(PhaseKind phase);
std::optional<LayerKind> parse_layer_kind(std::string_view text);
std::optional<PhaseKind> parse_phase_kind(std::string_view text);

/// Hyperparameters of one convolution, pooling or dense layer.
///
/// Spatial quantities are side lengths of square shapes. Fields that do not
/// apply to `kind` are ignored by validation and encoding.
struct LayerConfig {
  LayerKind kind = LayerKind::Convolution;
  int batch_size = 1;
  int matrix_size = 1;
  int kernel_size = 1;
  int channels_in = 1;
  int channels_out = 1;
  int strides = 1;
  int padding = 0;  // 0 = valid, 1 = same
  int activation = 0;  // 0 = none, 1 = relu
  int use_bias = 0;
  int dim_input = 1;
  int dim_output = 1;
  int pool_size = 1;

  static LayerConfig convolution(int batch, int matrix, int kernel, int c_in, int c_out,
                                 int stride, int padding, int activation, int bias);
  static LayerConfig pooling(int batch, int matrix, int pool, int c_in, int stride,
                             int padding, int activation);
  static LayerConfig dense(int batch, int dim_in, int dim_out, int activation, int bias);

  friend bool operator==(const LayerConfig&, const LayerConfig&) = default;
};

/// Names one field of LayerConfig. The order of a kind's fields in its
/// FeatureSchema is the encoding order.
enum class Feature : std::uint8_t {
  BatchSize,
  MatrixSize,
  KernelSize,
  ChannelsIn,
  ChannelsOut,
  Strides,
  Padding,
  Activation,
  UseBias,
  DimInput,
  DimOutput,
  PoolSize,
};

std::string_view feature_name(Feature feature);
std::optional<Feature> parse_feature(std::string_view name);
int feature_value(const LayerConfig& cfg, Feature feature);
void set_feature_value(LayerConfig& cfg, Feature feature, int value);
/// Inclusive valid range of a feature.
std::pair<int, int> feature_range(Feature feature);
/// Padding, activation and bias.
bool is_flag_feature(Feature feature);

inline constexpr std::string_view kSchemaVersion = "resperf-features/1";

struct FeatureSchema {
  LayerKind kind;
  std::vector<Feature> features;
  std::string version{kSchemaVersion};

  std::size_t size() const { return features.size(); }
  std::vector<std::string> names() const;
  /// Position of `feature` in the encoding, if the kind uses it.
  std::optional<std::size_t> index_of(Feature feature) const;

  friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;
};

const FeatureSchema& schema_for(LayerKind kind);

struct Violation {
  Feature feature;
  std::string message;  // e.g. "batch_size below 1"
};

/// Every range constraint `cfg` breaks; empty when the config is valid.
std::vector<Violation> validate_config(const LayerConfig& cfg);

class InvalidConfig : public std::invalid_argument {
 public:
  explicit InvalidConfig(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

using FeatureVector = std::vector<double>;

/// Throws InvalidConfig when validate_config reports anything.
FeatureVector encode_features(const LayerConfig& cfg);

/// Spatial output side for conv/pool given the padding mode.
int output_side(int input, int window, int stride, int padding);

struct PhaseTimes {
  double t_pre = 0.0;  // ms
  double t_exe = 0.0;
  double t_post = 0.0;

  double total() const { return t_pre + t_exe + t_post; }
  double operator[](PhaseKind phase) const;
  bool valid() const;

  friend bool operator==(const PhaseTimes&, const PhaseTimes&) = default;
};

}  // namespace resperf
