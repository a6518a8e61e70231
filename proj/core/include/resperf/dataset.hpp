#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "resperf/layer_config.hpp"
#include "resperf/tensor.hpp"

namespace resperf {

/// One micro-benchmark: a layer configuration and its three phase times.
struct Sample {
  LayerConfig config;
  PhaseTimes times;

  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Where a dataset came from. Generated sets carry seed, profile and
/// generator version; imported ones only the source file name.
struct Provenance {
  std::optional<std::uint64_t> seed;
  std::string profile;
  std::string generator;
  std::string imported_from;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Dataset {
  LayerKind kind = LayerKind::Convolution;
  FeatureSchema schema = schema_for(LayerKind::Convolution);
  std::vector<Sample> rows;
  Provenance provenance;

  std::size_t size() const { return rows.size(); }
  /// {m, p} matrix of encoded features in schema order.
  Tensor features() const;
  std::vector<double> targets(PhaseKind phase) const;
  /// Rows at the given positions, same kind/schema/provenance.
  Dataset subset(const std::vector<std::size_t>& indices) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Ingestion failure. `row` is 1-based over data rows (0 for the header),
/// `column` the offending header name when known.
class IngestError : public std::runtime_error {
 public:
  IngestError(std::size_t row, std::string column, const std::string& message);
  std::size_t row() const { return row_; }
  const std::string& column() const { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

/// CSV text: `#` metadata lines (schema version, kind, provenance), then a
/// header of the schema's feature names followed by t_pre,t_exe,t_post, then
/// one row per sample. Times use the shortest exact decimal form.
std::string format_dataset_csv(const Dataset& ds);
Dataset parse_dataset_csv(const std::string& text, const std::string& source_name = {});

void save_dataset(const Dataset& ds, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace resperf
