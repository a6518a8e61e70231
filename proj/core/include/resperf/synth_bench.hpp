#pragma once

#include <cstdint>
#include <string_view>

#include "resperf/dataset.hpp"
#include "resperf/device_profile.hpp"
#include "resperf/layer_config.hpp"
#include "resperf/random.hpp"

namespace resperf {

inline constexpr std::string_view kGeneratorVersion = "resperf-synth/1";

/// Work and traffic of one layer invocation.
struct LayerCost {
  double flops = 0.0;
  double input_bytes = 0.0;
  double output_bytes = 0.0;
  double weight_bytes = 0.0;
};

/// fp32 tensors. Throws std::overflow_error when a size does not fit in 64
/// bits and InvalidConfig for invalid configurations.
LayerCost layer_cost(const LayerConfig& cfg);

/// Cost window of the sampler. Configurations outside it are redrawn so that
/// generated micro-benchmarks stay within what one accelerator run can hold
/// and time above the noise floor.
struct SamplerBudget {
  double min_flops;
  double max_flops;
  double max_tensor_bytes;
};

SamplerBudget sampler_budget(LayerKind kind);

/// Draws every schema feature uniformly over its valid range and redraws
/// until the configuration is valid and within the kind's budget.
LayerConfig sample_config(LayerKind kind, RandomStream& stream);

/// Three-phase times in ms from closed-form kernels:
///   pre  = 2 * launch + input/pcie + reshape(input)
///   exe  = flops / (efficiency * peak)
///   post = reshape(output) + output/pcie + host_return
/// each multiplied by exp(noise_sigma * g) with g standard normal.
PhaseTimes oracle_times(const LayerConfig& cfg, const DeviceProfile& profile, RandomStream& stream);

struct GenerateOptions {
  double outlier_quantile = 0.995;
};

/// `n` samples from per-row substreams of `seed`. Rows with any phase time
/// above the batch's outlier quantile are replaced by fresh draws that fall
/// below it.
Dataset generate_dataset(LayerKind kind, std::size_t n, std::uint64_t seed,
                         const DeviceProfile& profile, const GenerateOptions& options = {});

/// Linear-interpolated quantile of unsorted values (q in [0, 1]).
double quantile(std::vector<double> values, double q);

}  // namespace resperf
