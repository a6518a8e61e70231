#include <cmath>

#include "doctest.h"
#include "resperf/device_profile.hpp"
#include "resperf/synth_bench.hpp"

using namespace resperf;

namespace {

DeviceProfile exact(const std::string& name) {
  auto p = *find_preset(name);
  p.noise_sigma = 0.0;
  return p;
}

// Phase times written out directly from the cost model, independent of
// layer_cost/oracle_times.
PhaseTimes hand_oracle(double flops, double in_bytes, double out_bytes, const DeviceProfile& p) {
  const double mib = 1024.0 * 1024.0;
  PhaseTimes t;
  t.t_pre = p.launch_overhead + in_bytes / (p.pcie_bandwidth * 1e9) * 1e3 + p.launch_overhead +
            p.reshape_overhead_per_mb * in_bytes / mib;
  t.t_exe = flops / (p.efficiency * p.peak_tflops * 1e12) * 1e3;
  t.t_post = p.reshape_overhead_per_mb * out_bytes / mib + out_bytes / (p.pcie_bandwidth * 1e9) * 1e3 +
             p.host_return_overhead;
  return t;
}

}  // namespace

TEST_CASE("noise-free conv oracle matches the hand-evaluated kernel") {
  const auto profile = exact("gtx1080ti");
  CHECK(profile.peak_tflops == 11.34);
  const auto cfg = LayerConfig::convolution(1, 32, 3, 1, 1, 1, 1, 0, 0);
  RandomStream rng(1);
  const auto t = oracle_times(cfg, profile, rng);
  // 2 * 1 * 32 * 32 * 3 * 3 * 1 * 1 flops, 32 * 32 floats in and out.
  const auto want = hand_oracle(18432.0, 4096.0, 4096.0, profile);
  CHECK(t.t_exe == doctest::Approx(18432.0 / (0.3 * 11.34e12) * 1e3).epsilon(1e-14));
  CHECK(t.t_pre == doctest::Approx(want.t_pre).epsilon(1e-14));
  CHECK(t.t_exe == doctest::Approx(want.t_exe).epsilon(1e-14));
  CHECK(t.t_post == doctest::Approx(want.t_post).epsilon(1e-14));
}

TEST_CASE("pool and dense costs follow the closed forms") {
  const auto profile = exact("p1000");
  RandomStream rng(1);
  // valid 2x2 stride-2 pooling of 28x28x6 -> 14x14x6
  auto t = oracle_times(LayerConfig::pooling(2, 28, 2, 6, 2, 0, 0), profile, rng);
  auto want = hand_oracle(2.0 * 14 * 14 * 4 * 6, 4.0 * 2 * 28 * 28 * 6, 4.0 * 2 * 14 * 14 * 6, profile);
  CHECK(t.t_exe == doctest::Approx(want.t_exe).epsilon(1e-14));
  CHECK(t.t_pre == doctest::Approx(want.t_pre).epsilon(1e-14));
  CHECK(t.t_post == doctest::Approx(want.t_post).epsilon(1e-14));

  t = oracle_times(LayerConfig::dense(3, 400, 120, 1, 1), profile, rng);
  want = hand_oracle(2.0 * 3 * 400 * 120, 4.0 * 3 * 400, 4.0 * 3 * 120, profile);
  CHECK(t.t_exe == doctest::Approx(want.t_exe).epsilon(1e-14));
  CHECK(t.t_post == doctest::Approx(want.t_post).epsilon(1e-14));

  const auto c = layer_cost(LayerConfig::convolution(2, 10, 3, 4, 5, 2, 0, 0, 1));
  // valid: (10 - 3) / 2 + 1 = 4
  CHECK(c.flops == 2.0 * 2 * 4 * 4 * 9 * 4 * 5);
  CHECK(c.output_bytes == 4.0 * 2 * 4 * 4 * 5);
  CHECK(c.weight_bytes == 4.0 * 9 * 4 * 5);
}

TEST_CASE("noise-free oracle is deterministic and doubles with dense batch") {
  const auto profile = exact("p2000");
  RandomStream a(3), b(4);
  const auto cfg = LayerConfig::dense(8, 1000, 300, 0, 0);
  CHECK(oracle_times(cfg, profile, a) == oracle_times(cfg, profile, b));
  auto doubled = cfg;
  doubled.batch_size = 16;
  CHECK(oracle_times(doubled, profile, a).t_exe == 2.0 * oracle_times(cfg, profile, b).t_exe);
}

TEST_CASE("noise multiplies each phase by a log-normal factor") {
  auto noisy = *find_preset("gtx1080ti");
  const auto clean = exact("gtx1080ti");
  const auto cfg = LayerConfig::convolution(4, 64, 3, 32, 32, 1, 1, 1, 1);
  RandomStream r1(9, {0, 1}), r2(9, {0, 1}), r3(9, {0, 1});
  const auto t = oracle_times(cfg, noisy, r1);
  const auto base = oracle_times(cfg, clean, r2);
  const double g_pre = r3.normal(), g_exe = r3.normal(), g_post = r3.normal();
  CHECK(t.t_pre == doctest::Approx(base.t_pre * std::exp(0.05 * g_pre)).epsilon(1e-14));
  CHECK(t.t_exe == doctest::Approx(base.t_exe * std::exp(0.05 * g_exe)).epsilon(1e-14));
  CHECK(t.t_post == doctest::Approx(base.t_post * std::exp(0.05 * g_post)).epsilon(1e-14));
}

TEST_CASE("t_exe is monotone in every size feature at zero noise") {
  const auto profile = exact("p5000");
  RandomStream rng(21);
  const std::vector<std::pair<LayerKind, Feature>> grow = {
      {LayerKind::Convolution, Feature::BatchSize},  {LayerKind::Convolution, Feature::MatrixSize},
      {LayerKind::Convolution, Feature::ChannelsIn}, {LayerKind::Convolution, Feature::ChannelsOut},
      {LayerKind::Pooling, Feature::BatchSize},      {LayerKind::Pooling, Feature::MatrixSize},
      {LayerKind::Pooling, Feature::ChannelsIn},     {LayerKind::Dense, Feature::BatchSize},
      {LayerKind::Dense, Feature::DimInput},         {LayerKind::Dense, Feature::DimOutput},
  };
  for (int trial = 0; trial < 200; ++trial) {
    for (const auto& [kind, feature] : grow) {
      const auto cfg = sample_config(kind, rng);
      auto bigger = cfg;
      const int hi = feature_range(feature).second;
      const int v = feature_value(cfg, feature);
      if (v == hi) continue;
      set_feature_value(bigger, feature, static_cast<int>(rng.uniform_int(v + 1, hi)));
      RandomStream s1(0), s2(0);
      CHECK(oracle_times(bigger, profile, s1).t_exe >= oracle_times(cfg, profile, s2).t_exe);
    }
  }
}

TEST_CASE("sampled configurations are valid and span the batch range") {
  RandomStream rng(42);
  int lo = 64, hi = 1;
  for (int i = 0; i < 10000; ++i) {
    const auto cfg = sample_config(LayerKind::Convolution, rng);
    REQUIRE(validate_config(cfg).empty());
    const auto cost = layer_cost(cfg);
    const auto budget = sampler_budget(LayerKind::Convolution);
    REQUIRE(cost.flops >= budget.min_flops);
    REQUIRE(cost.flops <= budget.max_flops);
    lo = std::min(lo, cfg.batch_size);
    hi = std::max(hi, cfg.batch_size);
  }
  CHECK(lo == 1);
  CHECK(hi == 64);
}

TEST_CASE("same seed and index reproduce a draw") {
  RandomStream a(42, {0, 0}), b(42, {0, 0});
  CHECK(sample_config(LayerKind::Convolution, a) == sample_config(LayerKind::Convolution, b));
}

TEST_CASE("generate_dataset is deterministic and filters outliers") {
  const auto profile = *find_preset("gtx1080ti");
  const auto ds = generate_dataset(LayerKind::Convolution, 400, 42, profile);
  CHECK(ds.size() == 400);
  CHECK(ds == generate_dataset(LayerKind::Convolution, 400, 42, profile));
  CHECK_FALSE(ds == generate_dataset(LayerKind::Convolution, 400, 43, profile));
  CHECK(ds.provenance.seed == 42u);
  CHECK(ds.provenance.profile == "gtx1080ti");
  for (const auto& row : ds.rows) {
    CHECK(row.config.kind == LayerKind::Convolution);
    CHECK(row.times.t_pre > 0.0);
    CHECK(row.times.t_exe > 0.0);
    CHECK(row.times.t_post > 0.0);
  }

  // Recompute the first-pass draws and their 99.5th percentiles by hand.
  std::vector<double> pre, exe, post;
  for (std::uint64_t i = 0; i < 400; ++i) {
    RandomStream cs(42, {i, 0}), ns(42, {i, 1});
    const auto t = oracle_times(sample_config(LayerKind::Convolution, cs), profile, ns);
    pre.push_back(t.t_pre);
    exe.push_back(t.t_exe);
    post.push_back(t.t_post);
  }
  const double lim_pre = quantile(pre, 0.995), lim_exe = quantile(exe, 0.995),
               lim_post = quantile(post, 0.995);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < 400; ++i) {
    CHECK(ds.rows[i].times.t_pre <= lim_pre);
    CHECK(ds.rows[i].times.t_exe <= lim_exe);
    CHECK(ds.rows[i].times.t_post <= lim_post);
    if (ds.rows[i].times.t_exe == exe[i]) ++kept;
  }
  CHECK(kept >= 390);
  CHECK(kept < 400);
}

TEST_CASE("single-row dense dataset") {
  const auto ds = generate_dataset(LayerKind::Dense, 1, 7, *find_preset("p1000"));
  CHECK(ds.size() == 1);
  CHECK(ds.kind == LayerKind::Dense);
}

TEST_CASE("quantile interpolates linearly") {
  CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 0.5) == 2.5);
  CHECK(quantile({5.0}, 0.995) == 5.0);
  CHECK(quantile({0.0, 10.0}, 0.25) == 2.5);
}
