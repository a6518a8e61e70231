#include "resperf/device_profile.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "resperf/text_util.hpp"

namespace resperf {

namespace {

// Reshaping reads and writes every byte once at `efficiency` of the memory
// bandwidth.
double reshape_ms_per_mib(double mem_bandwidth_gbs, double efficiency) {
  return 2.0 * 1048576.0 / (efficiency * mem_bandwidth_gbs * 1e9) * 1e3;
}

DeviceProfile make_preset(std::string name, double tflops, double bw) {
  DeviceProfile p;
  p.name = std::move(name);
  p.peak_tflops = tflops;
  p.mem_bandwidth = bw;
  p.pcie_bandwidth = 12.0;  // PCIe 3.0 x16, effective
  p.launch_overhead = 0.008;
  p.efficiency = 0.3;
  p.noise_sigma = 0.05;
  p.reshape_overhead_per_mb = reshape_ms_per_mib(bw, p.efficiency);
  p.host_return_overhead = 0.02;
  return p;
}

}  // namespace

std::vector<std::string> DeviceProfile::problems() const {
  std::vector<std::string> out;
  auto positive = [&](double v, const char* field) {
    if (!(std::isfinite(v) && v > 0.0)) out.push_back(std::string(field) + " must be positive");
  };
  if (name.empty()) out.emplace_back("name must not be empty");
  positive(peak_tflops, "peak_tflops");
  positive(mem_bandwidth, "mem_bandwidth");
  positive(pcie_bandwidth, "pcie_bandwidth");
  positive(launch_overhead, "launch_overhead");
  positive(reshape_overhead_per_mb, "reshape_overhead_per_mb");
  positive(host_return_overhead, "host_return_overhead");
  if (!(efficiency > 0.0 && efficiency <= 1.0)) out.emplace_back("efficiency must be in (0, 1]");
  if (!(std::isfinite(noise_sigma) && noise_sigma >= 0.0)) {
    out.emplace_back("noise_sigma must be >= 0");
  }
  return out;
}

const std::vector<DeviceProfile>& device_presets() {
  static const std::vector<DeviceProfile> presets = {
      make_preset("gtx1080ti", 11.34, 484.4),
      make_preset("p1000", 1.894, 80.19),
      make_preset("p2000", 3.031, 140.2),
      make_preset("p5000", 8.873, 288.5),
  };
  return presets;
}

std::optional<DeviceProfile> find_preset(std::string_view name) {
  for (const auto& p : device_presets()) {
    if (p.name == name) return p;
  }
  return std::nullopt;
}

DeviceProfile parse_device_profile(std::string_view text) {
  std::optional<DeviceProfile> base;
  std::vector<std::pair<std::string, std::string>> entries;
  int line_no = 0;
  for (auto line : split_lines(text)) {
    ++line_no;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::runtime_error("profile line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key == "base") {
      base = find_preset(value);
      if (!base) throw std::runtime_error("profile: unknown base preset '" + value + "'");
    } else {
      entries.emplace_back(std::move(key), std::move(value));
    }
  }

  DeviceProfile p = base.value_or(DeviceProfile{});
  bool have_reshape = false;
  for (const auto& [key, value] : entries) {
    if (key == "name") {
      p.name = value;
      continue;
    }
    const auto v = parse_double(value);
    if (!v) throw std::runtime_error("profile: value of '" + key + "' is not a number");
    if (key == "peak_tflops") p.peak_tflops = *v;
    else if (key == "mem_bandwidth") p.mem_bandwidth = *v;
    else if (key == "pcie_bandwidth") p.pcie_bandwidth = *v;
    else if (key == "launch_overhead") p.launch_overhead = *v;
    else if (key == "reshape_overhead_per_mb") { p.reshape_overhead_per_mb = *v; have_reshape = true; }
    else if (key == "host_return_overhead") p.host_return_overhead = *v;
    else if (key == "efficiency") p.efficiency = *v;
    else if (key == "noise_sigma") p.noise_sigma = *v;
    else throw std::runtime_error("profile: unknown key '" + key + "'");
  }
  if (!have_reshape && !base && p.mem_bandwidth > 0.0 && p.efficiency > 0.0) {
    p.reshape_overhead_per_mb = reshape_ms_per_mib(p.mem_bandwidth, p.efficiency);
  }
  if (auto errs = p.problems(); !errs.empty()) {
    std::string msg = "invalid device profile";
    for (const auto& e : errs) msg += "; " + e;
    throw std::runtime_error(msg);
  }
  return p;
}

DeviceProfile load_device_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open profile " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_device_profile(ss.str());
}

std::string format_device_profile(const DeviceProfile& p) {
  std::string out;
  out += "name = " + p.name + "\n";
  auto kv = [&](const char* key, double v) { out += std::string(key) + " = " + format_double(v) + "\n"; };
  kv("peak_tflops", p.peak_tflops);
  kv("mem_bandwidth", p.mem_bandwidth);
  kv("pcie_bandwidth", p.pcie_bandwidth);
  kv("launch_overhead", p.launch_overhead);
  kv("reshape_overhead_per_mb", p.reshape_overhead_per_mb);
  kv("host_return_overhead", p.host_return_overhead);
  kv("efficiency", p.efficiency);
  kv("noise_sigma", p.noise_sigma);
  return out;
}

DeviceProfile resolve_device_profile(std::string_view spec,
                                     const std::optional<std::filesystem::path>& profile_dir) {
  if (auto preset = find_preset(spec)) return *preset;
  const std::filesystem::path direct(spec);
  if (std::filesystem::is_regular_file(direct)) return load_device_profile(direct);
  if (profile_dir) {
    auto candidate = *profile_dir / (std::string(spec) + ".profile");
    if (std::filesystem::is_regular_file(candidate)) return load_device_profile(candidate);
  }
  throw std::runtime_error("unknown device profile '" + std::string(spec) + "'");
}

}  // namespace resperf
