#include <cmath>
#include <set>

#include "doctest.h"
#include "resperf/device_profile.hpp"
#include "resperf/model.hpp"
#include "resperf/synth_bench.hpp"
#include "resperf/trainer.hpp"

using namespace resperf;

namespace {

Dataset small_set(LayerKind kind, std::size_t n, std::uint64_t seed = 3) {
  return generate_dataset(kind, n, seed, *find_preset("gtx1080ti"));
}

Hyperparams quick(int epochs) {
  Hyperparams hp;
  hp.total_epochs = epochs;
  hp.lr = 1e-3;
  hp.l2 = 0.0;
  hp.batch_size = 32;
  return hp;
}

}  // namespace

TEST_CASE("MAPLE worked examples") {
  const std::vector<double> t{1.0, 2.0, 5.0};
  CHECK(maple_loss(t, t, 0.0, 0.0).loss == 0.0);
  CHECK(maple_loss(std::vector<double>{3.0}, std::vector<double>{1.0}, 0.0, 0.0).loss ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(maple_loss(t, t, 4.0, 0.1).loss == doctest::Approx(0.4).epsilon(1e-15));

  // Gradient of the data term by central difference.
  const std::vector<double> y{0.7, 2.5, 4.0};
  const auto r = maple_loss(y, t, 0.0, 0.0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    auto up = y, down = y;
    up[i] += 1e-6;
    down[i] -= 1e-6;
    const double fd = (maple_loss(up, t, 0.0, 0.0).loss - maple_loss(down, t, 0.0, 0.0).loss) / 2e-6;
    CHECK(r.grad[i] == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("MAPLE rejects unusable inputs") {
  CHECK_THROWS_AS(maple_loss(std::vector<double>{-1.0}, std::vector<double>{1.0}, 0, 0),
                  std::domain_error);
  CHECK_THROWS_AS(maple_loss(std::vector<double>{1.0}, std::vector<double>{0.0}, 0, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(maple_loss(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}, 0, 0),
                  std::invalid_argument);
}

TEST_CASE("MAPLE is non-negative and symmetric in log space") {
  RandomStream rng(4);
  for (int i = 0; i < 500; ++i) {
    const double t = 0.01 + 50.0 * rng.uniform();
    const double y = 0.01 + 50.0 * rng.uniform();
    CHECK(maple_loss(std::vector<double>{y}, std::vector<double>{t}, 0, 0).loss >= 0.0);
    const double lt = std::log1p(t);
    const double mirrored = std::expm1(2.0 * lt - std::log1p(y));
    if (mirrored > -1.0) {
      CHECK(maple_loss(std::vector<double>{y}, std::vector<double>{t}, 0, 0).loss ==
            doctest::Approx(maple_loss(std::vector<double>{mirrored}, std::vector<double>{t}, 0, 0).loss)
                .epsilon(1e-9));
    }
  }
}

TEST_CASE("step decay schedule") {
  CHECK(lr_at(0, 0.1, 40, 0.5) == 0.1);
  CHECK(lr_at(39, 0.1, 40, 0.5) == 0.1);
  CHECK(lr_at(40, 0.1, 40, 0.5) == 0.05);
  CHECK(lr_at(85, 0.1, 40, 0.5) == 0.025);
  for (int e = 1; e < 400; ++e) CHECK(lr_at(e, 0.1, 40, 0.5) <= lr_at(e - 1, 0.1, 40, 0.5));
}

TEST_CASE("split sizes and disjointness") {
  const auto ds = small_set(LayerKind::Dense, 100);
  const auto s = split_dataset(ds, 0.8, 42);
  CHECK(s.train.size() == 80);
  CHECK(s.test.size() == 20);
  const auto five = split_dataset(small_set(LayerKind::Dense, 5), 0.8, 42);
  CHECK(five.train.size() == 4);
  CHECK(five.test.size() == 1);

  // Every row lands in exactly one split.
  std::multiset<std::string> all, parts;
  auto key = [](const Sample& r) {
    return std::to_string(r.times.t_pre) + "/" + std::to_string(r.times.t_exe);
  };
  for (const auto& r : ds.rows) all.insert(key(r));
  for (const auto& r : s.train.rows) parts.insert(key(r));
  for (const auto& r : s.test.rows) parts.insert(key(r));
  CHECK(all == parts);
  CHECK(split_dataset(ds, 0.8, 42).train == s.train);
}

TEST_CASE("batches per epoch") {
  CHECK(batches_per_epoch(200, 128) == 2);
  CHECK(batches_per_epoch(128, 128) == 1);
  CHECK(batches_per_epoch(1, 128) == 1);
  CHECK_THROWS(batches_per_epoch(10, 0));
}

TEST_CASE("degenerate targets are rejected") {
  auto ds = small_set(LayerKind::Dense, 50);
  for (auto& r : ds.rows) r.times.t_exe = 0.5;
  CHECK_THROWS_AS(prepare_data(ds, PhaseKind::Execution, quick(1)), TrainingError);
  CHECK_THROWS_AS(prepare_data(small_set(LayerKind::Dense, 4), PhaseKind::Execution, quick(1)),
                  std::invalid_argument);
}

TEST_CASE("hyperparameter validation") {
  Hyperparams hp;
  CHECK(hp.problems().empty());
  hp.batch_size = 0;
  hp.scaler = 0.0;
  CHECK(hp.problems().size() == 2);
}

TEST_CASE("zero learning rate leaves weights unchanged") {
  const auto data = prepare_data(small_set(LayerKind::Dense, 100), PhaseKind::Execution, quick(2));
  auto net = build_mlp(5, 1, 16);
  const auto before = net.params();
  auto hp = quick(2);
  hp.lr = 0.0;
  hp.l2 = 0.1;
  const auto history = fit_network(net, data, hp);
  CHECK(net.params() == before);
  CHECK(history.size() == 2);
  CHECK(history[0].test_maple == history[1].test_maple);
}

TEST_CASE("Adam moves weights against the gradient") {
  auto net = build_mlp(2, 1, 4);
  auto g = net.zero_gradients();
  for (auto& l : g) {
    for (auto& v : l.weight.values()) v = 1.0;
  }
  const auto before = net.params();
  AdamOptimizer adam(net, 0.9, 0.999, 1e-8);
  adam.step(net, g, 0.01, 0.0);
  CHECK(adam.steps() == 1);
  // First bias-corrected step has magnitude lr.
  CHECK(net.params()[0].weight[0] == doctest::Approx(before[0].weight[0] - 0.01).epsilon(1e-9));
  CHECK(net.params()[0].bias == before[0].bias);
}

TEST_CASE("training is deterministic for a fixed seed") {
  const auto ds = small_set(LayerKind::Dense, 120);
  const auto a = train(ds, PhaseKind::Execution, quick(2));
  const auto b = train(ds, PhaseKind::Execution, quick(2));
  CHECK(a.network.params() == b.network.params());
  CHECK(a.history == b.history);
  CHECK(a.history.size() == 2);
  CHECK(a.kind == LayerKind::Dense);
  auto hp = quick(2);
  hp.seed = 7;
  CHECK_FALSE(train(ds, PhaseKind::Execution, hp).network.params() == a.network.params());
}

TEST_CASE("a short run reduces the training loss") {
  const auto ds = small_set(LayerKind::Dense, 400);
  auto hp = quick(15);
  std::vector<EpochRecord> seen;
  const auto model = train(ds, PhaseKind::Postprocess, hp, [&](const EpochRecord& r) { seen.push_back(r); });
  CHECK(seen == model.history);
  CHECK(model.history.back().train_maple < model.history.front().train_maple);
}
