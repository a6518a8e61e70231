#include "resperf/layer_config.hpp"

#include <algorithm>
#include <cmath>

namespace resperf {

namespace {

struct FeatureInfo {
  Feature feature;
  std::string_view name;
  int lo;
  int hi;
};

constexpr std::array<FeatureInfo, 12> kFeatureInfo = {{
    {Feature::BatchSize, "batch_size", 1, 64},
    {Feature::MatrixSize, "matrix_size", 1, 512},
    {Feature::KernelSize, "kernel_size", 1, 7},
    {Feature::ChannelsIn, "channels_in", 1, 9999},
    {Feature::ChannelsOut, "channels_out", 1, 9999},
    {Feature::Strides, "strides", 1, 4},
    {Feature::Padding, "padding", 0, 1},
    {Feature::Activation, "activation", 0, 1},
    {Feature::UseBias, "use_bias", 0, 1},
    {Feature::DimInput, "dim_input", 1, 4096},
    {Feature::DimOutput, "dim_output", 1, 4096},
    {Feature::PoolSize, "pool_size", 1, 7},
}};

const FeatureInfo& info(Feature f) { return kFeatureInfo[static_cast<std::size_t>(f)]; }

}  // namespace

std::string_view to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::Convolution: return "conv";
    case LayerKind::Pooling: return "pool";
    case LayerKind::Dense: return "dense";
  }
  return "?";
}

std::string_view to_string(PhaseKind phase) {
  switch (phase) {
    case PhaseKind::Preprocess: return "pre";
    case PhaseKind::Execution: return "exe";
    case PhaseKind::Postprocess: return "post";
  }
  return "?";
}

std::optional<LayerKind> parse_layer_kind(std::string_view text) {
  if (text == "conv" || text == "convolution") return LayerKind::Convolution;
  if (text == "pool" || text == "pooling") return LayerKind::Pooling;
  if (text == "dense") return LayerKind::Dense;
  return std::nullopt;
}

std::optional<PhaseKind> parse_phase_kind(std::string_view text) {
  if (text == "pre" || text == "preprocess") return PhaseKind::Preprocess;
  if (text == "exe" || text == "execution") return PhaseKind::Execution;
  if (text == "post" || text == "postprocess") return PhaseKind::Postprocess;
  return std::nullopt;
}

LayerConfig LayerConfig::convolution(int batch, int matrix, int kernel, int c_in, int c_out,
                                     int stride, int padding, int activation, int bias) {
  LayerConfig c;
  c.kind = LayerKind::Convolution;
  c.batch_size = batch;
  c.matrix_size = matrix;
  c.kernel_size = kernel;
  c.channels_in = c_in;
  c.channels_out = c_out;
  c.strides = stride;
  c.padding = padding;
  c.activation = activation;
  c.use_bias = bias;
  return c;
}

LayerConfig LayerConfig::pooling(int batch, int matrix, int pool, int c_in, int stride,
                                 int padding, int activation) {
  LayerConfig c;
  c.kind = LayerKind::Pooling;
  c.batch_size = batch;
  c.matrix_size = matrix;
  c.pool_size = pool;
  c.channels_in = c_in;
  c.strides = stride;
  c.padding = padding;
  c.activation = activation;
  return c;
}

LayerConfig LayerConfig::dense(int batch, int dim_in, int dim_out, int activation, int bias) {
  LayerConfig c;
  c.kind = LayerKind::Dense;
  c.batch_size = batch;
  c.dim_input = dim_in;
  c.dim_output = dim_out;
  c.activation = activation;
  c.use_bias = bias;
  return c;
}

std::string_view feature_name(Feature feature) { return info(feature).name; }

std::optional<Feature> parse_feature(std::string_view name) {
  for (const auto& fi : kFeatureInfo) {
    if (fi.name == name) return fi.feature;
  }
  return std::nullopt;
}

int feature_value(const LayerConfig& cfg, Feature feature) {
  switch (feature) {
    case Feature::BatchSize: return cfg.batch_size;
    case Feature::MatrixSize: return cfg.matrix_size;
    case Feature::KernelSize: return cfg.kernel_size;
    case Feature::ChannelsIn: return cfg.channels_in;
    case Feature::ChannelsOut: return cfg.channels_out;
    case Feature::Strides: return cfg.strides;
    case Feature::Padding: return cfg.padding;
    case Feature::Activation: return cfg.activation;
    case Feature::UseBias: return cfg.use_bias;
    case Feature::DimInput: return cfg.dim_input;
    case Feature::DimOutput: return cfg.dim_output;
    case Feature::PoolSize: return cfg.pool_size;
  }
  return 0;
}

void set_feature_value(LayerConfig& cfg, Feature feature, int value) {
  switch (feature) {
    case Feature::BatchSize: cfg.batch_size = value; break;
    case Feature::MatrixSize: cfg.matrix_size = value; break;
    case Feature::KernelSize: cfg.kernel_size = value; break;
    case Feature::ChannelsIn: cfg.channels_in = value; break;
    case Feature::ChannelsOut: cfg.channels_out = value; break;
    case Feature::Strides: cfg.strides = value; break;
    case Feature::Padding: cfg.padding = value; break;
    case Feature::Activation: cfg.activation = value; break;
    case Feature::UseBias: cfg.use_bias = value; break;
    case Feature::DimInput: cfg.dim_input = value; break;
    case Feature::DimOutput: cfg.dim_output = value; break;
    case Feature::PoolSize: cfg.pool_size = value; break;
  }
}

std::pair<int, int> feature_range(Feature feature) {
  return {info(feature).lo, info(feature).hi};
}

bool is_flag_feature(Feature feature) {
  return feature == Feature::Padding || feature == Feature::Activation ||
         feature == Feature::UseBias;
}

std::vector<std::string> FeatureSchema::names() const {
  std::vector<std::string> out;
  out.reserve(features.size());
  for (auto f : features) out.emplace_back(feature_name(f));
  return out;
}

std::optional<std::size_t> FeatureSchema::index_of(Feature feature) const {
  auto it = std::find(features.begin(), features.end(), feature);
  if (it == features.end()) return std::nullopt;
  return static_cast<std::size_t>(it - features.begin());
}

const FeatureSchema& schema_for(LayerKind kind) {
  using F = Feature;
  static const FeatureSchema conv{
      LayerKind::Convolution,
      {F::BatchSize, F::MatrixSize, F::KernelSize, F::ChannelsIn, F::ChannelsOut, F::Strides,
       F::Padding, F::Activation, F::UseBias}};
  static const FeatureSchema pool{
      LayerKind::Pooling,
      {F::BatchSize, F::MatrixSize, F::PoolSize, F::ChannelsIn, F::Strides, F::Padding,
       F::Activation}};
  static const FeatureSchema dense{
      LayerKind::Dense, {F::BatchSize, F::DimInput, F::DimOutput, F::Activation, F::UseBias}};
  switch (kind) {
    case LayerKind::Convolution: return conv;
    case LayerKind::Pooling: return pool;
    case LayerKind::Dense: return dense;
  }
  return conv;
}

std::vector<Violation> validate_config(const LayerConfig& cfg) {
  std::vector<Violation> out;
  const auto& schema = schema_for(cfg.kind);
  for (auto f : schema.features) {
    const int v = feature_value(cfg, f);
    const auto [lo, hi] = feature_range(f);
    if (v < lo) {
      out.push_back({f, std::string(feature_name(f)) + " below " + std::to_string(lo)});
    } else if (v > hi) {
      out.push_back({f, std::string(feature_name(f)) + " above " + std::to_string(hi)});
    }
  }
  auto window_check = [&](Feature window) {
    if (!schema.index_of(window)) return;
    const int w = feature_value(cfg, window);
    if (w >= 1 && cfg.matrix_size >= 1 && w > cfg.matrix_size) {
      out.push_back({window, std::string(feature_name(window)) + " exceeds matrix_size"});
    }
  };
  window_check(Feature::KernelSize);
  window_check(Feature::PoolSize);
  return out;
}

namespace {
std::string join_violations(const std::vector<Violation>& vs) {
  std::string msg = "invalid layer config:";
  for (std::size_t i = 0; i < vs.size(); ++i) {
    msg += (i == 0 ? " " : "; ");
    msg += vs[i].message;
  }
  return msg;
}
}  // namespace

InvalidConfig::InvalidConfig(std::vector<Violation> violations)
    : std::invalid_argument(join_violations(violations)), violations_(std::move(violations)) {}

FeatureVector encode_features(const LayerConfig& cfg) {
  if (auto vs = validate_config(cfg); !vs.empty()) throw InvalidConfig(std::move(vs));
  const auto& schema = schema_for(cfg.kind);
  FeatureVector out;
  out.reserve(schema.size());
  for (auto f : schema.features) out.push_back(static_cast<double>(feature_value(cfg, f)));
  return out;
}

int output_side(int input, int window, int stride, int padding) {
  if (padding != 0) return (input + stride - 1) / stride;
  return (input - window) / stride + 1;
}

double PhaseTimes::operator[](PhaseKind phase) const {
  switch (phase) {
    case PhaseKind::Preprocess: return t_pre;
    case PhaseKind::Execution: return t_exe;
    case PhaseKind::Postprocess: return t_post;
  }
  return 0.0;
}

bool PhaseTimes::valid() const {
  for (double t : {t_pre, t_exe, t_post}) {
    if (!std::isfinite(t) || t < 0.0) return false;
  }
  return true;
}

}  // namespace resperf
