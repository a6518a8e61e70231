#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "resperf/layer_config.hpp"

namespace resperf {

/// A linear chain of layers to be timed end to end.
struct NetworkDescription {
  std::string name;
  std::vector<LayerConfig> layers;

  /// Copy with every layer's batch size replaced.
  NetworkDescription with_batch(int batch_size) const;
};

class DescriptionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// JSON document:
///   {"name": ..., "batch_size": n (optional, applied to every layer),
///    "layers": [{"type": "conv" | "pool" | "dense" | "relu" | "flatten", <feature>: value, ...}]}
/// Layer fields use feature names; padding accepts "valid"/"same" and
/// activation "none"/"relu" as well as 0/1. "relu" and "flatten" entries
/// fold into the preceding layer (relu sets its activation). Unsupported
/// types and out-of-range fields are rejected with the layer index.
NetworkDescription parse_network_description(std::string_view text);
NetworkDescription load_network_description(const std::filesystem::path& path);

}  // namespace resperf
