#include "resperf/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace resperf {

namespace {

constexpr double kLambdaZero = 1e-8;
constexpr double kGridLo = -3.0;
constexpr double kGridHi = 3.0;
constexpr double kGridStep = 0.01;
constexpr double kGoldenTol = 1e-4;

void require_fitted(const TransformerState& s) {
  if (!s.fitted) throw std::logic_error("transformer state is not fitted");
}

}  // namespace

std::vector<double> scalar_multiply(std::span<const double> targets, double scaler) {
  if (!(scaler > 0.0) || !std::isfinite(scaler)) {
    throw std::invalid_argument("scaler must be positive");
  }
  std::vector<double> out(targets.begin(), targets.end());
  for (auto& t : out) t *= scaler;
  return out;
}

std::vector<double> scalar_divide(std::span<const double> targets, double scaler) {
  if (!(scaler > 0.0) || !std::isfinite(scaler)) {
    throw std::invalid_argument("scaler must be positive");
  }
  std::vector<double> out(targets.begin(), targets.end());
  for (auto& t : out) t /= scaler;
  return out;
}

double apply_boxcox(double x, double lambda) {
  if (!(x > 0.0)) throw std::domain_error("Box-Cox input must be positive");
  const double lx = std::log(x);
  if (std::abs(lambda) < kLambdaZero) return lx;
  return std::expm1(lambda * lx) / lambda;
}

double boxcox_log_likelihood(std::span<const double> column, double lambda) {
  const auto n = static_cast<double>(column.size());
  double mean = 0.0, sum_log = 0.0;
  for (double x : column) {
    mean += apply_boxcox(x, lambda);
    sum_log += std::log(x);
  }
  mean /= n;
  double var = 0.0;
  for (double x : column) {
    const double d = apply_boxcox(x, lambda) - mean;
    var += d * d;
  }
  var /= n;
  return -0.5 * n * std::log(var) + (lambda - 1.0) * sum_log;
}

double fit_boxcox_lambda(std::span<const double> column) {
  std::set<double> distinct;
  for (double x : column) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw std::invalid_argument("Box-Cox column must be strictly positive");
    }
    if (distinct.size() < 2) distinct.insert(x);
  }
  if (distinct.size() < 2) throw std::invalid_argument("Box-Cox column is constant");

  const int steps = static_cast<int>(std::lround((kGridHi - kGridLo) / kGridStep));
  double best = kGridLo;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i) {
    const double lambda = kGridLo + kGridStep * i;
    const double ll = boxcox_log_likelihood(column, lambda);
    if (ll > best_ll) {
      best_ll = ll;
      best = lambda;
    }
  }

  // Golden-section refinement on the bracket around the best grid point.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::max(kGridLo, best - kGridStep);
  double b = std::min(kGridHi, best + kGridStep);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = boxcox_log_likelihood(column, c);
  double fd = boxcox_log_likelihood(column, d);
  while (b - a > kGoldenTol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = boxcox_log_likelihood(column, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = boxcox_log_likelihood(column, d);
    }
  }
  const double refined = 0.5 * (a + b);
  return boxcox_log_likelihood(column, refined) >= best_ll ? refined : best;
}

std::vector<std::string> TransformerState::boxcox_feature_names() const {
  std::vector<std::string> out;
  for (auto f : boxcox_features) out.emplace_back(feature_name(f));
  return out;
}

std::vector<Feature> boxcox_features_for(LayerKind kind) {
  switch (kind) {
    case LayerKind::Convolution: return {Feature::MatrixSize, Feature::KernelSize};
    case LayerKind::Pooling: return {Feature::MatrixSize};
    case LayerKind::Dense: return {};
  }
  return {};
}

TransformerState fit_pipeline(const Dataset& train, const PipelineOptions& options) {
  return fit_pipeline(train.kind, train.features(), options);
}

TransformerState fit_pipeline(LayerKind kind, const Tensor& features, const PipelineOptions& options) {
  const auto& schema = schema_for(kind);
  const std::size_t p = schema.size();
  if (features.rank() != 2 || features.dim(1) != p) {
    throw std::invalid_argument("feature matrix does not match the " +
                                std::string(to_string(kind)) + " schema");
  }
  const std::size_t m = features.dim(0);
  if (m == 0) throw std::invalid_argument("cannot fit a pipeline on an empty training set");
  if (!(options.scaler > 0.0)) throw std::invalid_argument("scaler must be positive");

  TransformerState s;
  s.kind = kind;
  s.schema_version = schema.version;
  s.scaler = options.scaler;

  Tensor work = features;
  if (options.boxcox) {
    for (auto f : boxcox_features_for(kind)) {
      const std::size_t j = *schema.index_of(f);
      std::vector<double> column(m);
      for (std::size_t i = 0; i < m; ++i) column[i] = work[i * p + j];
      double lambda = 0.0;
      try {
        lambda = fit_boxcox_lambda(column);
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string(feature_name(f)) + ": " + e.what());
      }
      s.boxcox_features.push_back(f);
      s.boxcox_lambdas.push_back(lambda);
      for (std::size_t i = 0; i < m; ++i) work[i * p + j] = apply_boxcox(column[i], lambda);
    }
  }

  s.mean.assign(p, 0.0);
  s.stddev.assign(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) mean += work[i * p + j];
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = work[i * p + j] - mean;
      var += d * d;
    }
    var /= static_cast<double>(m);
    double sd = std::sqrt(var);
    if (!(sd > 0.0)) {
      if (!is_flag_feature(schema.features[j])) {
        throw std::invalid_argument("feature " + std::string(feature_name(schema.features[j])) +
                                    " has zero variance in the training split");
      }
      sd = 1.0;
    }
    s.mean[j] = mean;
    s.stddev[j] = sd;
  }
  s.fitted = true;
  return s;
}

std::vector<double> apply_pipeline_row(const TransformerState& state,
                                       std::span<const double> features) {
  require_fitted(state);
  const auto& schema = schema_for(state.kind);
  if (state.schema_version != schema.version) {
    throw std::invalid_argument("transformer schema version '" + state.schema_version +
                                "' does not match '" + schema.version + "'");
  }
  if (features.size() != schema.size()) {
    throw std::invalid_argument("feature vector length " + std::to_string(features.size()) +
                                " does not match the " + std::string(to_string(state.kind)) +
                                " schema (" + std::to_string(schema.size()) + ")");
  }
  std::vector<double> out(features.begin(), features.end());
  for (std::size_t b = 0; b < state.boxcox_features.size(); ++b) {
    const std::size_t j = *schema.index_of(state.boxcox_features[b]);
    if (!(out[j] > 0.0)) {
      throw std::domain_error(std::string(feature_name(state.boxcox_features[b])) +
                              " must be positive for Box-Cox");
    }
    out[j] = apply_boxcox(out[j], state.boxcox_lambdas[b]);
  }
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = (out[j] - state.mean[j]) / state.stddev[j];
  return out;
}

Transformed apply_pipeline(const TransformerState& state, const Tensor& features,
                           std::optional<std::span<const double>> targets) {
  require_fitted(state);
  const std::size_t p = schema_for(state.kind).size();
  if (features.rank() != 2 || features.dim(1) != p) {
    throw std::invalid_argument("feature matrix does not match the " +
                                std::string(to_string(state.kind)) + " schema");
  }
  const std::size_t m = features.dim(0);
  Transformed out{Tensor({m, p}), {}};
  for (std::size_t i = 0; i < m; ++i) {
    const auto row = apply_pipeline_row(state, features.values().subspan(i * p, p));
    std::copy(row.begin(), row.end(), out.features.data() + i * p);
  }
  if (targets) {
    if (targets->size() != m) throw std::invalid_argument("target count does not match rows");
    out.targets = scalar_multiply(*targets, state.scaler);
  }
  return out;
}

double invert_target(const TransformerState& state, double scaled) {
  require_fitted(state);
  return scaled / state.scaler;
}

}  // namespace resperf
