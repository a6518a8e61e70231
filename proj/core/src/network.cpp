#include "resperf/network.hpp"

#include <Eigen/Core>
#include <cmath>
#include <string>

namespace resperf {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;
using ConstRowVector = Eigen::Map<const Eigen::RowVectorXd>;
using RowVectorMap = Eigen::Map<Eigen::RowVectorXd>;

std::string shape_text(const Tensor::Shape& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + ")";
}

Tensor::Shape with_batch(std::size_t n, const Tensor::Shape& s) {
  Tensor::Shape out{n};
  out.insert(out.end(), s.begin(), s.end());
  return out;
}

// Rows are (sample, position); columns are (tap, channel). Positions outside
// the sequence read as zero.
void im2col(const Tensor& in, std::size_t kernel, RowMatrix& col) {
  const std::size_t n = in.dim(0), len = in.dim(1), ch = in.dim(2);
  const auto half = static_cast<std::ptrdiff_t>(kernel / 2);
  col.setZero(static_cast<Eigen::Index>(n * len), static_cast<Eigen::Index>(kernel * ch));
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t l = 0; l < len; ++l) {
      double* row = col.data() + (b * len + l) * kernel * ch;
      for (std::size_t k = 0; k < kernel; ++k) {
        const auto src = static_cast<std::ptrdiff_t>(l) + static_cast<std::ptrdiff_t>(k) - half;
        if (src < 0 || src >= static_cast<std::ptrdiff_t>(len)) continue;
        const double* from = in.data() + (b * len + static_cast<std::size_t>(src)) * ch;
        std::copy(from, from + ch, row + k * ch);
      }
    }
  }
}

void col2im_add(const RowMatrix& dcol, std::size_t kernel, Tensor& din) {
  const std::size_t n = din.dim(0), len = din.dim(1), ch = din.dim(2);
  const auto half = static_cast<std::ptrdiff_t>(kernel / 2);
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t l = 0; l < len; ++l) {
      const double* row = dcol.data() + (b * len + l) * kernel * ch;
      for (std::size_t k = 0; k < kernel; ++k) {
        const auto src = static_cast<std::ptrdiff_t>(l) + static_cast<std::ptrdiff_t>(k) - half;
        if (src < 0 || src >= static_cast<std::ptrdiff_t>(len)) continue;
        double* to = din.data() + (b * len + static_cast<std::size_t>(src)) * ch;
        for (std::size_t c = 0; c < ch; ++c) to[c] += row[k * ch + c];
      }
    }
  }
}

void add_into(Tensor& dst, const Tensor& src) {
  if (dst.empty()) {
    dst = src;
    return;
  }
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

}  // namespace

std::string_view to_string(OpKind op) {
  switch (op) {
    case OpKind::Conv1D: return "conv1d";
    case OpKind::Dense: return "dense";
    case OpKind::ReLU: return "relu";
    case OpKind::Add: return "add";
    case OpKind::Dropout: return "dropout";
    case OpKind::Flatten: return "flatten";
  }
  return "?";
}

LayerSpec LayerSpec::conv1d(std::size_t filters, std::size_t kernel) {
  return {OpKind::Conv1D, filters, kernel, 0, 0.0};
}
LayerSpec LayerSpec::dense(std::size_t units) { return {OpKind::Dense, units, 0, 0, 0.0}; }
LayerSpec LayerSpec::relu() { return {OpKind::ReLU, 0, 0, 0, 0.0}; }
LayerSpec LayerSpec::add(std::size_t source) { return {OpKind::Add, 0, 0, source, 0.0}; }
LayerSpec LayerSpec::dropout(double rate) { return {OpKind::Dropout, 0, 0, 0, rate}; }
LayerSpec LayerSpec::flatten() { return {OpKind::Flatten, 0, 0, 0, 0.0}; }

Network::Network(std::vector<LayerSpec> specs, Tensor::Shape input_shape, std::uint64_t seed)
    : specs_(std::move(specs)), input_shape_(std::move(input_shape)) {
  infer_shapes();
  params_.resize(specs_.size());
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const auto& spec = specs_[i];
    if (!spec.has_params()) continue;
    const auto& in_shape = i == 0 ? input_shape_ : shapes_[i - 1];
    Tensor::Shape wshape;
    std::size_t fan_in = 0;
    if (spec.op == OpKind::Conv1D) {
      wshape = {spec.kernel, in_shape[1], spec.units};
      fan_in = spec.kernel * in_shape[1];
    } else {
      wshape = {in_shape[0], spec.units};
      fan_in = in_shape[0];
    }
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
    RandomStream rng(seed, {i});
    Tensor w(wshape);
    for (auto& v : w.values()) v = bound * (2.0 * rng.uniform() - 1.0);
    params_[i] = {std::move(w), Tensor({spec.units}, 0.0)};
  }
}

Network::Network(std::vector<LayerSpec> specs, Tensor::Shape input_shape,
                 std::vector<LayerParams> params)
    : specs_(std::move(specs)), input_shape_(std::move(input_shape)), params_(std::move(params)) {
  infer_shapes();
  if (params_.size() != specs_.size()) throw ShapeError("parameter list length mismatch");
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const auto& spec = specs_[i];
    const auto& p = params_[i];
    if (!spec.has_params()) {
      if (!p.weight.empty() || !p.bias.empty()) {
        throw ShapeError("layer " + std::to_string(i) + " takes no parameters");
      }
      continue;
    }
    const auto& in_shape = i == 0 ? input_shape_ : shapes_[i - 1];
    const Tensor::Shape expected = spec.op == OpKind::Conv1D
                                       ? Tensor::Shape{spec.kernel, in_shape[1], spec.units}
                                       : Tensor::Shape{in_shape[0], spec.units};
    if (p.weight.shape() != expected || p.bias.shape() != Tensor::Shape{spec.units}) {
      throw ShapeError("layer " + std::to_string(i) + " parameter shape mismatch: weight " +
                       shape_text(p.weight.shape()) + ", expected " + shape_text(expected));
    }
  }
}

void Network::infer_shapes() {
  if (input_shape_.empty() || shape_product(input_shape_) == 0) {
    throw ShapeError("network input shape must be non-empty");
  }
  shapes_.clear();
  shapes_.reserve(specs_.size());
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const auto& spec = specs_[i];
    const auto& in = i == 0 ? input_shape_ : shapes_[i - 1];
    const std::string where = "layer " + std::to_string(i) + " (" +
                              std::string(to_string(spec.op)) + "): ";
    switch (spec.op) {
      case OpKind::Conv1D:
        if (in.size() != 2) throw ShapeError(where + "needs (length, channels) input");
        if (spec.kernel == 0 || spec.kernel % 2 == 0) throw ShapeError(where + "kernel must be odd");
        if (spec.units == 0) throw ShapeError(where + "no filters");
        shapes_.push_back({in[0], spec.units});
        break;
      case OpKind::Dense:
        if (in.size() != 1) throw ShapeError(where + "needs flat input");
        if (spec.units == 0) throw ShapeError(where + "no units");
        shapes_.push_back({spec.units});
        break;
      case OpKind::Flatten:
        shapes_.push_back({shape_product(in)});
        break;
      case OpKind::Add:
        if (spec.source >= i) throw ShapeError(where + "source must precede the layer");
        if (shapes_[spec.source] != in) {
          throw ShapeError(where + "shortcut shape " + shape_text(shapes_[spec.source]) +
                           " differs from " + shape_text(in));
        }
        shapes_.push_back(in);
        break;
      case OpKind::Dropout:
        if (!(spec.rate >= 0.0 && spec.rate < 1.0)) throw ShapeError(where + "rate outside [0, 1)");
        shapes_.push_back(in);
        break;
      case OpKind::ReLU:
        shapes_.push_back(in);
        break;
    }
  }
}

std::vector<LayerParams>& Network::mutable_params() {
  ++revision_;
  return params_;
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.weight.size() + p.bias.size();
  return n;
}

double Network::weight_squared_norm() const {
  double s = 0.0;
  for (const auto& p : params_) s += p.weight.squared_norm();
  return s;
}

LayerCensus Network::census() const {
  LayerCensus c;
  for (const auto& s : specs_) {
    switch (s.op) {
      case OpKind::Conv1D: ++c.conv; break;
      case OpKind::Dense: ++c.dense; break;
      case OpKind::ReLU: ++c.relu; break;
      case OpKind::Add: ++c.add; break;
      case OpKind::Dropout: ++c.dropout; break;
      case OpKind::Flatten: ++c.flatten; break;
    }
  }
  return c;
}

Tensor Network::forward(const Tensor& batch, Mode mode, RandomStream* dropout_stream,
                        ForwardCache* cache) const {
  if (batch.rank() == 0) throw ShapeError("empty input batch");
  const std::size_t n = batch.dim(0);
  if (batch.size() != n * input_length() || n == 0) {
    throw ShapeError("input batch " + shape_text(batch.shape()) + " does not match network input " +
                     shape_text(input_shape_));
  }
  Tensor x = batch.reshaped(with_batch(n, input_shape_));

  std::vector<Tensor> local_outputs;
  std::vector<Tensor>& outputs = cache ? cache->outputs : local_outputs;
  outputs.assign(specs_.size(), Tensor{});
  if (cache) {
    cache->dropout_masks.assign(specs_.size(), Tensor{});
    cache->mode = mode;
    cache->owner = this;
    cache->revision = revision_;
  }

  RowMatrix col;
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const auto& spec = specs_[i];
    const Tensor& in = i == 0 ? x : outputs[i - 1];
    Tensor out(with_batch(n, shapes_[i]));
    switch (spec.op) {
      case OpKind::Conv1D: {
        im2col(in, spec.kernel, col);
        const auto& p = params_[i];
        ConstMatrixMap w(p.weight.data(), static_cast<Eigen::Index>(spec.kernel * in.dim(2)),
                         static_cast<Eigen::Index>(spec.units));
        MatrixMap o(out.data(), col.rows(), static_cast<Eigen::Index>(spec.units));
        o.noalias() = col * w;
        o.rowwise() += ConstRowVector(p.bias.data(), static_cast<Eigen::Index>(spec.units));
        break;
      }
      case OpKind::Dense: {
        const auto& p = params_[i];
        const auto in_w = static_cast<Eigen::Index>(in.dim(1));
        ConstMatrixMap a(in.data(), static_cast<Eigen::Index>(n), in_w);
        ConstMatrixMap w(p.weight.data(), in_w, static_cast<Eigen::Index>(spec.units));
        MatrixMap o(out.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(spec.units));
        o.noalias() = a * w;
        o.rowwise() += ConstRowVector(p.bias.data(), static_cast<Eigen::Index>(spec.units));
        break;
      }
      case OpKind::ReLU:
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = in[j] > 0.0 ? in[j] : 0.0;
        break;
      case OpKind::Add: {
        const Tensor& shortcut = outputs[spec.source];
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = in[j] + shortcut[j];
        break;
      }
      case OpKind::Dropout:
        if (mode == Mode::Train && spec.rate > 0.0) {
          if (!dropout_stream) throw std::invalid_argument("train-mode dropout needs a random stream");
          const double keep_scale = 1.0 / (1.0 - spec.rate);
          Tensor mask(out.shape());
          for (std::size_t j = 0; j < out.size(); ++j) {
            mask[j] = dropout_stream->uniform() < spec.rate ? 0.0 : keep_scale;
            out[j] = in[j] * mask[j];
          }
          if (cache) cache->dropout_masks[i] = std::move(mask);
        } else {
          out = in;
        }
        break;
      case OpKind::Flatten:
        out = in.reshaped(out.shape());
        break;
    }
    outputs[i] = std::move(out);
  }
  if (cache) cache->input = std::move(x);
  if (specs_.empty()) return batch;
  return outputs.back();
}

Gradients Network::zero_gradients() const {
  Gradients g(params_.size());
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (!params_[i].weight.empty()) {
      g[i] = {Tensor(params_[i].weight.shape()), Tensor(params_[i].bias.shape())};
    }
  }
  return g;
}

Gradients Network::backward(const ForwardCache& cache, const Tensor& output_grad,
                            Tensor* input_grad) const {
  if (cache.owner != this || cache.revision != revision_) {
    throw std::logic_error("forward cache is stale or belongs to another network");
  }
  if (cache.mode != Mode::Train) throw std::logic_error("backward needs a train-mode forward cache");
  if (specs_.empty() || cache.outputs.size() != specs_.size()) {
    throw std::logic_error("forward cache does not match the network");
  }
  if (output_grad.size() != cache.outputs.back().size()) {
    throw ShapeError("output gradient " + shape_text(output_grad.shape()) +
                     " does not match output " + shape_text(cache.outputs.back().shape()));
  }

  const std::size_t n = cache.input.dim(0);
  Gradients grads = zero_gradients();
  std::vector<Tensor> dout(specs_.size());
  dout.back() = output_grad.reshaped(cache.outputs.back().shape());
  Tensor dinput;

  RowMatrix col, dcol;
  for (std::size_t idx = specs_.size(); idx-- > 0;) {
    if (dout[idx].empty()) continue;
    const auto& spec = specs_[idx];
    const Tensor& in = idx == 0 ? cache.input : cache.outputs[idx - 1];
    const Tensor& g = dout[idx];
    Tensor din(in.shape());
    switch (spec.op) {
      case OpKind::Conv1D: {
        const auto rows = static_cast<Eigen::Index>(n * in.dim(1));
        const auto kc = static_cast<Eigen::Index>(spec.kernel * in.dim(2));
        const auto f = static_cast<Eigen::Index>(spec.units);
        im2col(in, spec.kernel, col);
        ConstMatrixMap gm(g.data(), rows, f);
        MatrixMap dw(grads[idx].weight.data(), kc, f);
        dw.noalias() = col.transpose() * gm;
        RowVectorMap(grads[idx].bias.data(), f) = gm.colwise().sum();
        if (idx > 0 || input_grad) {
          ConstMatrixMap w(params_[idx].weight.data(), kc, f);
          dcol.noalias() = gm * w.transpose();
          col2im_add(dcol, spec.kernel, din);
        }
        break;
      }
      case OpKind::Dense: {
        const auto nn = static_cast<Eigen::Index>(n);
        const auto in_w = static_cast<Eigen::Index>(in.dim(1));
        const auto f = static_cast<Eigen::Index>(spec.units);
        ConstMatrixMap a(in.data(), nn, in_w);
        ConstMatrixMap gm(g.data(), nn, f);
        MatrixMap(grads[idx].weight.data(), in_w, f).noalias() = a.transpose() * gm;
        RowVectorMap(grads[idx].bias.data(), f) = gm.colwise().sum();
        if (idx > 0 || input_grad) {
          ConstMatrixMap w(params_[idx].weight.data(), in_w, f);
          MatrixMap(din.data(), nn, in_w).noalias() = gm * w.transpose();
        }
        break;
      }
      case OpKind::ReLU: {
        const Tensor& out = cache.outputs[idx];
        for (std::size_t j = 0; j < din.size(); ++j) din[j] = out[j] > 0.0 ? g[j] : 0.0;
        break;
      }
      case OpKind::Add:
        din = g;
        add_into(dout[spec.source], g);
        break;
      case OpKind::Dropout: {
        const Tensor& mask = cache.dropout_masks[idx];
        if (mask.empty()) {
          din = g;
        } else {
          for (std::size_t j = 0; j < din.size(); ++j) din[j] = g[j] * mask[j];
        }
        break;
      }
      case OpKind::Flatten:
        din = g.reshaped(in.shape());
        break;
    }
    if (idx > 0) {
      add_into(dout[idx - 1], din);
    } else {
      dinput = std::move(din);
    }
    // Free activations' gradients once consumed.
    dout[idx] = Tensor{};
  }
  if (input_grad) *input_grad = std::move(dinput);
  return grads;
}

std::vector<LayerSpec> resperfnet_specs(const ResPerfNetShape& shape) {
  std::vector<LayerSpec> specs;
  for (std::size_t filters : {shape.group1, shape.group2, shape.group3}) {
    specs.push_back(LayerSpec::conv1d(filters));
    specs.push_back(LayerSpec::relu());
    for (int block = 0; block < 2; ++block) {
      const std::size_t shortcut = specs.size() - 1;
      specs.push_back(LayerSpec::conv1d(filters));
      specs.push_back(LayerSpec::relu());
      specs.push_back(LayerSpec::conv1d(filters));
      specs.push_back(LayerSpec::add(shortcut));
      specs.push_back(LayerSpec::relu());
    }
  }
  specs.push_back(LayerSpec::flatten());
  for (int i = 0; i < 3; ++i) {
    specs.push_back(LayerSpec::dense(shape.dense_width));
    specs.push_back(LayerSpec::relu());
  }
  specs.push_back(LayerSpec::dropout(shape.dropout));
  specs.push_back(LayerSpec::dense(1));
  return specs;
}

Network build_resperfnet(std::size_t feature_count, std::uint64_t seed,
                         const ResPerfNetShape& shape) {
  if (feature_count == 0) throw ShapeError("feature count must be at least 1");
  return Network(resperfnet_specs(shape), {feature_count, 1}, seed);
}

std::vector<LayerSpec> mlp_specs(std::size_t width, double dropout) {
  std::vector<LayerSpec> specs;
  for (int i = 0; i < 3; ++i) {
    specs.push_back(LayerSpec::dense(width));
    specs.push_back(LayerSpec::relu());
  }
  specs.push_back(LayerSpec::dropout(dropout));
  specs.push_back(LayerSpec::dense(1));
  return specs;
}

Network build_mlp(std::size_t feature_count, std::uint64_t seed, std::size_t width,
                  double dropout) {
  if (feature_count == 0) throw ShapeError("feature count must be at least 1");
  return Network(mlp_specs(width, dropout), {feature_count}, seed);
}

}  // namespace resperf
