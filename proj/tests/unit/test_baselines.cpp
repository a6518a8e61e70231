#include <cmath>

#include "doctest.h"
#include "resperf/baselines.hpp"
#include "resperf/device_profile.hpp"
#include "resperf/metrics.hpp"
#include "resperf/synth_bench.hpp"

using namespace resperf;

namespace {

Tensor random_features(std::size_t m, std::size_t p, std::uint64_t seed) {
  RandomStream rng(seed);
  Tensor x({m, p});
  for (auto& v : x.values()) v = 2.0 * rng.uniform() - 1.0;
  return x;
}

}  // namespace

TEST_CASE("polynomial expansion layout") {
  const std::vector<double> x{2.0, 3.0};
  CHECK(expand_polynomial(x, 1) == std::vector<double>{2.0, 3.0});
  CHECK(expand_polynomial(x, 2) == std::vector<double>{2.0, 3.0, 4.0, 6.0, 9.0});
  CHECK(expanded_feature_count(9, 2) == 9 + 45);
  CHECK_THROWS(expanded_feature_count(3, 3));
}

TEST_CASE("linear data is recovered exactly") {
  const auto x = random_features(200, 4, 1);
  const std::vector<double> w{0.5, 1.0, -2.0, 0.25, 3.0};
  std::vector<double> t(200);
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = w[0];
    for (std::size_t j = 0; j < 4; ++j) t[i] += w[j + 1] * x[i * 4 + j];
  }
  const auto model = fit_poly(x, t, 1, 0.0);
  REQUIRE(model.coefficients.size() == 5);
  for (std::size_t j = 0; j < w.size(); ++j) CHECK(std::abs(model.coefficients[j] - w[j]) < 1e-8);
}

TEST_CASE("quadratic data fits to well under a tenth of a percent") {
  const auto x = random_features(300, 3, 2);
  std::vector<double> t(300);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double a = x[i * 3], b = x[i * 3 + 1], c = x[i * 3 + 2];
    t[i] = 10.0 + 2.0 * a - b + 0.5 * a * b + 1.5 * c * c;
  }
  const auto model = fit_poly(x, t);
  std::vector<double> pred(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    pred[i] = model.predict(std::span<const double>(x.data() + i * 3, 3));
  }
  CHECK(mape(pred, t) < 0.1);
}

TEST_CASE("least-squares residuals are orthogonal to the design") {
  const auto x = random_features(100, 3, 3);
  RandomStream rng(4);
  std::vector<double> t(100);
  for (auto& v : t) v = rng.normal();
  const auto model = fit_poly(x, t, 2, 0.0);
  std::vector<double> dot(expanded_feature_count(3, 2) + 1, 0.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const std::span<const double> row(x.data() + i * 3, 3);
    const double r = t[i] - model.predict(row);
    const auto e = expand_polynomial(row, 2);
    dot[0] += r;
    for (std::size_t j = 0; j < e.size(); ++j) dot[j + 1] += r * e[j];
  }
  for (double d : dot) CHECK(std::abs(d) < 1e-9);
}

TEST_CASE("singular designs are reported") {
  Tensor x({10, 2});
  for (std::size_t i = 0; i < 10; ++i) {
    x[i * 2] = static_cast<double>(i);
    x[i * 2 + 1] = 2.0 * static_cast<double>(i);
  }
  std::vector<double> t(10, 1.0);
  CHECK_THROWS_AS(fit_poly(x, t, 1, 0.0), std::runtime_error);
  CHECK_THROWS_AS(fit_poly(x, std::vector<double>(3, 1.0), 1, 0.0), std::invalid_argument);
}

TEST_CASE("baseline trainers share the split and pipeline") {
  const auto ds = generate_dataset(LayerKind::Dense, 200, 5, *find_preset("p5000"));
  Hyperparams hp;
  hp.total_epochs = 2;
  hp.lr = 0.0;
  const auto poly = train_poly(ds, PhaseKind::Execution, hp);
  const auto mlp = train_mlp(ds, PhaseKind::Execution, hp);
  const auto mlp2 = train_mlp(ds, PhaseKind::Execution, hp);
  CHECK(poly.transform == mlp.transform);
  CHECK(poly.type == ModelType::Poly);
  CHECK(poly.history.empty());
  CHECK(mlp.type == ModelType::Mlp);
  CHECK(mlp.network.census().conv == 0);
  CHECK(mlp.network.params() == mlp2.network.params());
  CHECK(mlp.network.params() == build_mlp(5, hp.seed).params());
}
