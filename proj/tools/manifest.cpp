#include "manifest.hpp"

#include <fstream>

#include "json.hpp"

namespace resperf::cli {

RunManifest::RunManifest(std::string command, std::vector<std::string> argv)
    : command_(std::move(command)), argv_(std::move(argv)), start_(std::chrono::steady_clock::now()) {}

void RunManifest::write(const std::filesystem::path& primary_output) const {
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
  nlohmann::json doc = {{"command", command_},
                        {"arguments", argv_},
                        {"inputs", inputs_},
                        {"outputs", outputs_},
                        {"tool_version", RESPERF_VERSION},
                        {"duration_seconds", elapsed.count()}};
  doc["seed"] = seed_ ? nlohmann::json(*seed_) : nlohmann::json(nullptr);
  if (!notes_.empty()) doc["notes"] = notes_;
  auto path = primary_output;
  path += ".manifest.json";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << "\n";
}

}  // namespace resperf::cli
