#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace resperf::cli {

/// Record of one command run, written next to its primary output as
/// `<output>.manifest.json`.
class RunManifest {
 public:
  RunManifest(std::string command, std::vector<std::string> argv);

  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void add_input(const std::filesystem::path& p) { inputs_.push_back(p.string()); }
  void add_output(const std::filesystem::path& p) { outputs_.push_back(p.string()); }
  void note(const std::string& key, const std::string& value) { notes_[key] = value; }

  /// Stamps the duration and writes the manifest.
  void write(const std::filesystem::path& primary_output) const;

 private:
  std::string command_;
  std::vector<std::string> argv_;
  std::optional<std::uint64_t> seed_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::map<std::string, std::string> notes_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace resperf::cli
