#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "resperf/model.hpp"

namespace resperf {

inline constexpr std::string_view kModelFormat = "resperf-model/1";

/// Malformed, truncated or incompatible model document.
class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// JSON document holding the format tag, model type, kind, phase, feature
/// schema version, hyperparameters, transformer state, layer specs, weights
/// (row-major, shortest round-trip decimal) and training history.
std::string format_model(const TrainedPhaseModel& model);
TrainedPhaseModel parse_model(std::string_view text);

void save_model(const TrainedPhaseModel& model, const std::filesystem::path& path);
TrainedPhaseModel load_model(const std::filesystem::path& path);

}  // namespace resperf
