#include "resperf/model.hpp"

#include <algorithm>

namespace resperf {

std::string_view to_string(ModelType type) {
  switch (type) {
    case ModelType::ResPerfNet: return "resperfnet";
    case ModelType::Mlp: return "mlp";
    case ModelType::Poly: return "poly";
  }
  return "unknown";
}

std::optional<ModelType> parse_model_type(std::string_view text) {
  for (auto t : {ModelType::ResPerfNet, ModelType::Mlp, ModelType::Poly}) {
    if (text == to_string(t)) return t;
  }
  return std::nullopt;
}

std::size_t expanded_feature_count(std::size_t features, int degree) {
  if (degree == 1) return features;
  if (degree == 2) return features + features * (features + 1) / 2;
  throw std::invalid_argument("polynomial degree must be 1 or 2");
}

std::vector<double> expand_polynomial(std::span<const double> row, int degree) {
  std::vector<double> out;
  out.reserve(expanded_feature_count(row.size(), degree));
  out.assign(row.begin(), row.end());
  if (degree == 2) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      for (std::size_t j = i; j < row.size(); ++j) out.push_back(row[i] * row[j]);
    }
  }
  return out;
}

double PolyModel::predict(std::span<const double> row) const {
  const auto x = expand_polynomial(row, degree);
  if (coefficients.size() != x.size() + 1) {
    throw std::invalid_argument("polynomial has " + std::to_string(coefficients.size()) +
                                " coefficients, expected " + std::to_string(x.size() + 1));
  }
  double y = coefficients[0];
  for (std::size_t i = 0; i < x.size(); ++i) y += coefficients[i + 1] * x[i];
  return y;
}

double TrainedPhaseModel::predict_raw(const LayerConfig& cfg) const {
  if (cfg.kind != kind) {
    throw SchemaMismatch("model is for " + std::string(to_string(kind)) + " layers, got a " +
                         std::string(to_string(cfg.kind)) + " config");
  }
  const auto encoded = encode_features(cfg);
  Tensor row({1, encoded.size()}, encoded);
  return predict_raw(row).front();
}

std::vector<double> TrainedPhaseModel::predict_raw(const Tensor& features) const {
  if (transform.schema_version != schema_version || schema_version != kSchemaVersion) {
    throw SchemaMismatch("model schema " + schema_version + " does not match " +
                         std::string(kSchemaVersion));
  }
  const auto p = schema_for(kind).size();
  if (features.rank() != 2 || features.dim(1) != p) {
    throw SchemaMismatch("expected " + std::to_string(p) + " features per row for " +
                         std::string(to_string(kind)) + " layers");
  }
  const auto x = apply_pipeline(transform, features).features;
  const std::size_t m = x.dim(0);
  std::vector<double> out(m);
  if (type == ModelType::Poly) {
    for (std::size_t i = 0; i < m; ++i) {
      out[i] = poly.predict(std::span<const double>(x.data() + i * p, p));
    }
  } else {
    const Tensor y = network.forward(x, Mode::Infer);
    std::copy_n(y.data(), m, out.begin());
  }
  for (auto& v : out) v = invert_target(transform, v);
  return out;
}

}  // namespace resperf
