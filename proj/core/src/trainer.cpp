#include "resperf/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "resperf/metrics.hpp"
#include "resperf/model.hpp"
#include "resperf/random.hpp"

namespace resperf {

namespace {

constexpr std::uint64_t kSplitStream = 0x5350;    // "SP"
constexpr std::uint64_t kShuffleStream = 0x5348;  // "SH"
constexpr std::uint64_t kDropoutStream = 0x4450;  // "DP"

void shuffle(std::vector<std::size_t>& idx, RandomStream& rng) {
  // Fisher-Yates with the stream's own integer mapping.
  for (std::size_t i = idx.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i - 1)));
    std::swap(idx[i - 1], idx[j]);
  }
}

Tensor gather_rows(const Tensor& x, std::span<const std::size_t> rows) {
  const std::size_t p = x.dim(1);
  Tensor out({rows.size(), p});
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy_n(x.data() + rows[r] * p, p, out.data() + r * p);
  }
  return out;
}

}  // namespace

std::vector<std::string> Hyperparams::problems() const {
  std::vector<std::string> out;
  if (total_epochs < 1) out.emplace_back("total_epochs must be at least 1");
  if (!(lr >= 0.0)) out.emplace_back("lr must be non-negative");
  if (batch_size < 1) out.emplace_back("batch size must be at least 1");
  if (decay_period < 1) out.emplace_back("decay period must be at least 1");
  if (!(decay_factor > 0.0)) out.emplace_back("decay factor must be positive");
  if (!(l2 >= 0.0)) out.emplace_back("l2 must be non-negative");
  if (!(scaler > 0.0)) out.emplace_back("scaler must be positive");
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) out.emplace_back("split ratio must be in (0, 1)");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0)) out.emplace_back("beta1 must be in [0, 1)");
  if (!(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) out.emplace_back("beta2 must be in [0, 1)");
  if (!(adam_epsilon > 0.0)) out.emplace_back("epsilon must be positive");
  return out;
}

MapleResult maple_loss(std::span<const double> predictions, std::span<const double> targets,
                       double weight_squared_norm, double l2) {
  if (predictions.size() != targets.size() || predictions.empty()) {
    throw std::invalid_argument("maple_loss needs equal, non-zero lengths");
  }
  const auto n = static_cast<double>(predictions.size());
  MapleResult r;
  r.grad.resize(predictions.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double y = predictions[i];
    const double t = targets[i];
    if (!(y > -1.0)) throw std::domain_error("prediction " + std::to_string(i) + " is <= -1");
    const double lt = std::log1p(t);
    if (!(lt >= kMapleTargetFloor)) {
      throw std::invalid_argument("target " + std::to_string(i) +
                                  " too small for MAPLE (log(1+t) < 1e-6)");
    }
    const double diff = std::log1p(y) - lt;
    sum += std::abs(diff) / lt;
    const double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
    r.grad[i] = sign / (n * lt * (1.0 + y));
  }
  r.loss = sum / n + l2 * weight_squared_norm;
  return r;
}

double lr_at(int epoch, double lr0, int period, double factor) {
  if (epoch < 0) throw std::invalid_argument("epoch must be non-negative");
  if (period < 1) throw std::invalid_argument("decay period must be at least 1");
  return lr0 * std::pow(factor, epoch / period);
}

DatasetSplit split_dataset(const Dataset& ds, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("split ratio must be in (0, 1)");
  const std::size_t m = ds.size();
  if (m < 2) throw std::invalid_argument("need at least two rows to split");
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  RandomStream rng(seed, {kSplitStream});
  shuffle(idx, rng);
  auto n_train = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(m)));
  n_train = std::clamp<std::size_t>(n_train, 1, m - 1);
  std::vector<std::size_t> train(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  return {ds.subset(train), ds.subset(test)};
}

std::size_t batches_per_epoch(std::size_t rows, std::size_t batch_size) {
  if (batch_size == 0) throw std::invalid_argument("batch size must be at least 1");
  return (rows + batch_size - 1) / batch_size;
}

AdamOptimizer::AdamOptimizer(const Network& net, double beta1, double beta2, double epsilon)
    : beta1_(beta1), beta2_(beta2), epsilon_(epsilon), m_(net.zero_gradients()),
      v_(net.zero_gradients()) {}

void AdamOptimizer::step(Network& net, const Gradients& grads, double lr, double l2) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  auto& params = net.mutable_params();
  auto update = [&](Tensor& p, const Tensor& g, Tensor& m, Tensor& v, double decay) {
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double gj = g[j] + decay * p[j];
      m[j] = beta1_ * m[j] + (1.0 - beta1_) * gj;
      v[j] = beta2_ * v[j] + (1.0 - beta2_) * gj * gj;
      p[j] -= lr * (m[j] / c1) / (std::sqrt(v[j] / c2) + epsilon_);
    }
  };
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].weight.empty()) continue;
    update(params[i].weight, grads[i].weight, m_[i].weight, v_[i].weight, 2.0 * l2);
    update(params[i].bias, grads[i].bias, m_[i].bias, v_[i].bias, 0.0);
  }
}

PreparedData prepare_data(const Dataset& ds, PhaseKind phase, const Hyperparams& hp) {
  if (auto errs = hp.problems(); !errs.empty()) throw std::invalid_argument(errs.front());
  if (ds.size() < 5) throw std::invalid_argument("training needs at least 5 rows");
  const auto all_t = ds.targets(phase);
  if (std::all_of(all_t.begin(), all_t.end(), [&](double t) { return t == all_t.front(); })) {
    throw TrainingError("degenerate dataset: every " + std::string(to_string(phase)) +
                        " target is equal");
  }
  auto split = split_dataset(ds, hp.split_ratio, hp.seed);
  PreparedData out;
  out.transform = fit_pipeline(split.train, {hp.scaler, hp.boxcox});
  const auto train_t = split.train.targets(phase);
  const auto test_t = split.test.targets(phase);
  auto tr = apply_pipeline(out.transform, split.train.features(), std::span<const double>(train_t));
  auto te = apply_pipeline(out.transform, split.test.features(), std::span<const double>(test_t));
  out.train_x = std::move(tr.features);
  out.train_t = std::move(tr.targets);
  out.test_x = std::move(te.features);
  out.test_t = std::move(te.targets);
  for (std::size_t i = 0; i < out.train_t.size(); ++i) {
    if (!(std::log1p(out.train_t[i]) >= kMapleTargetFloor)) {
      throw TrainingError("training row " + std::to_string(i) + " has a target too small for MAPLE");
    }
  }
  return out;
}

std::vector<double> predict_scaled(const Network& net, const Tensor& x) {
  const Tensor y = net.forward(x, Mode::Infer);
  return {y.values().begin(), y.values().end()};
}

std::vector<EpochRecord> fit_network(Network& net, const PreparedData& data, const Hyperparams& hp,
                                     const EpochCallback& on_epoch) {
  if (auto errs = hp.problems(); !errs.empty()) throw std::invalid_argument(errs.front());
  const std::size_t m = data.train_t.size();
  AdamOptimizer adam(net, hp.adam_beta1, hp.adam_beta2, hp.adam_epsilon);
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::vector<double> test_ms(data.test_t.size());
  for (std::size_t i = 0; i < test_ms.size(); ++i) {
    test_ms[i] = invert_target(data.transform, data.test_t[i]);
  }

  std::vector<EpochRecord> history;
  history.reserve(static_cast<std::size_t>(hp.total_epochs));
  const std::size_t n_batches = batches_per_epoch(m, hp.batch_size);
  for (int epoch = 0; epoch < hp.total_epochs; ++epoch) {
    const double lr = lr_at(epoch, hp.lr, hp.decay_period, hp.decay_factor);
    RandomStream shuffle_rng(hp.seed, {kShuffleStream, static_cast<std::uint64_t>(epoch)});
    shuffle(order, shuffle_rng);

    double data_loss_sum = 0.0;
    for (std::size_t b = 0; b < n_batches; ++b) {
      const std::size_t begin = b * hp.batch_size;
      const std::size_t end = std::min(begin + hp.batch_size, m);
      const std::span<const std::size_t> rows(order.data() + begin, end - begin);
      const Tensor x = gather_rows(data.train_x, rows);
      std::vector<double> t(rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r) t[r] = data.train_t[rows[r]];

      RandomStream dropout_rng(hp.seed, {kDropoutStream, static_cast<std::uint64_t>(epoch), b});
      ForwardCache cache;
      const Tensor y = net.forward(x, Mode::Train, &dropout_rng, &cache);
      // Predictions below zero are evaluated at zero; their gradient passes
      // straight through so they are pushed back up.
      std::vector<double> clamped(y.values().begin(), y.values().end());
      for (auto& v : clamped) v = std::max(v, 0.0);
      auto loss = maple_loss(clamped, t, 0.0, 0.0);
      if (!std::isfinite(loss.loss) || !y.all_finite()) {
        throw TrainingError("training diverged at epoch " + std::to_string(epoch));
      }
      data_loss_sum += loss.loss * static_cast<double>(rows.size());
      const auto grads = net.backward(cache, Tensor({rows.size(), 1}, std::move(loss.grad)));
      adam.step(net, grads, lr, hp.l2);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.lr = lr;
    rec.train_maple = data_loss_sum / static_cast<double>(m);
    if (!data.test_t.empty()) {
      auto pred = predict_scaled(net, data.test_x);
      for (auto& v : pred) v = std::max(v, 0.0);
      rec.test_maple = maple_loss(pred, data.test_t, 0.0, 0.0).loss;
      std::vector<double> pred_ms(pred.size());
      for (std::size_t i = 0; i < pred.size(); ++i) pred_ms[i] = invert_target(data.transform, pred[i]);
      rec.test_mape = mape(pred_ms, test_ms);
      rec.test_rmse = rmse(pred_ms, test_ms);
    }
    if (!std::isfinite(rec.train_maple) || !std::isfinite(rec.test_maple)) {
      throw TrainingError("training diverged at epoch " + std::to_string(epoch));
    }
    history.push_back(rec);
    if (on_epoch) on_epoch(rec);
  }
  return history;
}

TrainedPhaseModel train(const Dataset& ds, PhaseKind phase, const Hyperparams& hp,
                        const EpochCallback& on_epoch) {
  const auto data = prepare_data(ds, phase, hp);
  TrainedPhaseModel model;
  model.type = ModelType::ResPerfNet;
  model.kind = ds.kind;
  model.phase = phase;
  model.schema_version = ds.schema.version;
  model.hyperparams = hp;
  model.transform = data.transform;
  model.network = build_resperfnet(ds.schema.size(), hp.seed);
  model.history = fit_network(model.network, data, hp, on_epoch);
  return model;
}

}  // namespace resperf
