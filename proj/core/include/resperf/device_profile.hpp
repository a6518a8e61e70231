#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace resperf {

/// Parameters of the synthetic accelerator behind the timing oracle.
///
/// Peak throughput and memory bandwidth of the presets come from vendor
/// datasheets. The transfer, overhead and efficiency knobs are oracle
/// parameters with no measured counterpart.
struct DeviceProfile {
  std::string name;
  double peak_tflops = 0.0;
  double mem_bandwidth = 0.0;    // GB/s
  double pcie_bandwidth = 0.0;   // GB/s
  double launch_overhead = 0.0;  // ms per issued command
  double reshape_overhead_per_mb = 0.0;  // ms per MiB
  double host_return_overhead = 0.0;     // ms
  double efficiency = 0.3;  // fraction of peak reached by kernels, (0, 1]
  double noise_sigma = 0.05;  // log-normal multiplicative noise

  /// Human-readable list of broken invariants; empty when usable.
  std::vector<std::string> problems() const;

  friend bool operator==(const DeviceProfile&, const DeviceProfile&) = default;
};

/// gtx1080ti, p1000, p2000, p5000.
const std::vector<DeviceProfile>& device_presets();
std::optional<DeviceProfile> find_preset(std::string_view name);

/// Key-value text: one `key = value` per line, `#` starts a comment.
/// Keys are the field names above; missing keys fall back to the preset
/// named by `base` (if present) or are an error.
DeviceProfile parse_device_profile(std::string_view text);
DeviceProfile load_device_profile(const std::filesystem::path& path);
std::string format_device_profile(const DeviceProfile& profile);

/// Resolves a --profile argument: a preset name, a path to a profile file,
/// or a name looked up as `<dir>/<name>.profile` in `profile_dir`.
DeviceProfile resolve_device_profile(std::string_view spec,
                                     const std::optional<std::filesystem::path>& profile_dir);

}  // namespace resperf
