#include "resperf/dataset.hpp"

#include <fstream>
#include <map>

#include "resperf/text_util.hpp"

namespace resperf {

namespace {

constexpr std::array<std::string_view, 3> kTimeColumns = {"t_pre", "t_exe", "t_post"};

std::string ingest_message(std::size_t row, const std::string& message) {
  if (row == 0) return "header: " + message;
  return "row " + std::to_string(row) + ": " + message;
}

}  // namespace

IngestError::IngestError(std::size_t row, std::string column, const std::string& message)
    : std::runtime_error(ingest_message(row, message)), row_(row), column_(std::move(column)) {}

Tensor Dataset::features() const {
  const std::size_t p = schema.size();
  Tensor out({rows.size(), p});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      out[i * p + j] = static_cast<double>(feature_value(rows[i].config, schema.features[j]));
    }
  }
  return out;
}

std::vector<double> Dataset::targets(PhaseKind phase) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.times[phase]);
  return out;
}

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
  Dataset out;
  out.kind = kind;
  out.schema = schema;
  out.provenance = provenance;
  out.rows.reserve(indices.size());
  for (auto i : indices) out.rows.push_back(rows.at(i));
  return out;
}

std::string format_dataset_csv(const Dataset& ds) {
  std::string out;
  out += "# schema: " + ds.schema.version + "\n";
  out += "# kind: " + std::string(to_string(ds.kind)) + "\n";
  if (ds.provenance.seed) out += "# seed: " + std::to_string(*ds.provenance.seed) + "\n";
  if (!ds.provenance.profile.empty()) out += "# profile: " + ds.provenance.profile + "\n";
  if (!ds.provenance.generator.empty()) out += "# generator: " + ds.provenance.generator + "\n";
  if (!ds.provenance.imported_from.empty()) out += "# source: " + ds.provenance.imported_from + "\n";

  for (const auto& name : ds.schema.names()) out += name + ",";
  out += "t_pre,t_exe,t_post\n";
  for (const auto& row : ds.rows) {
    for (auto f : ds.schema.features) out += std::to_string(feature_value(row.config, f)) + ",";
    out += format_double(row.times.t_pre) + "," + format_double(row.times.t_exe) + "," +
           format_double(row.times.t_post) + "\n";
  }
  return out;
}

Dataset parse_dataset_csv(const std::string& text, const std::string& source_name) {
  std::map<std::string, std::string, std::less<>> meta;
  std::vector<std::string_view> lines;
  for (auto line : split_lines(text)) {
    auto t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      t.remove_prefix(1);
      const auto colon = t.find(':');
      if (colon != std::string_view::npos) {
        meta[std::string(trim(t.substr(0, colon)))] = std::string(trim(t.substr(colon + 1)));
      }
      continue;
    }
    lines.push_back(t);
  }
  if (lines.empty()) throw IngestError(0, "", "missing header line");

  if (auto it = meta.find("schema"); it != meta.end() && it->second != kSchemaVersion) {
    throw IngestError(0, "", "schema version '" + it->second + "' does not match '" +
                                 std::string(kSchemaVersion) + "'");
  }

  std::vector<std::string> header;
  for (auto cell : split(lines.front(), ',')) header.emplace_back(trim(cell));

  std::optional<LayerKind> kind;
  if (auto it = meta.find("kind"); it != meta.end()) {
    kind = parse_layer_kind(it->second);
    if (!kind) throw IngestError(0, "", "unknown layer kind '" + it->second + "'");
  } else {
    // No metadata: pick the kind whose schema names the header's first columns.
    for (auto k : kAllLayerKinds) {
      const auto names = schema_for(k).names();
      if (header.size() >= names.size() &&
          std::equal(names.begin(), names.end(), header.begin())) {
        kind = k;
      }
    }
    if (!kind) throw IngestError(0, "", "cannot infer layer kind from header");
  }

  Dataset ds;
  ds.kind = *kind;
  ds.schema = schema_for(*kind);

  // Column position of every schema feature and time.
  std::vector<std::string> expected = ds.schema.names();
  for (auto t : kTimeColumns) expected.emplace_back(t);
  std::vector<std::size_t> position(expected.size());
  for (std::size_t e = 0; e < expected.size(); ++e) {
    auto it = std::find(header.begin(), header.end(), expected[e]);
    if (it == header.end()) throw IngestError(0, expected[e], "missing column " + expected[e]);
    position[e] = static_cast<std::size_t>(it - header.begin());
  }
  for (const auto& h : header) {
    if (std::find(expected.begin(), expected.end(), h) == expected.end()) {
      throw IngestError(0, h, "unexpected column '" + h + "' for kind " +
                                  std::string(to_string(*kind)));
    }
  }

  const std::size_t p = ds.schema.size();
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t row_no = li;
    auto cells = split(lines[li], ',');
    if (cells.size() != header.size()) {
      throw IngestError(row_no, "", "expected " + std::to_string(header.size()) + " cells, found " +
                                        std::to_string(cells.size()));
    }
    Sample s;
    s.config.kind = *kind;
    for (std::size_t j = 0; j < p; ++j) {
      const auto& name = expected[j];
      const auto cell = trim(cells[position[j]]);
      const auto v = parse_int(cell);
      if (!v) {
        throw IngestError(row_no, name, name + ": '" + std::string(cell) + "' is not an integer");
      }
      if (*v < std::numeric_limits<int>::min() || *v > std::numeric_limits<int>::max()) {
        throw IngestError(row_no, name, name + " out of integer range");
      }
      set_feature_value(s.config, ds.schema.features[j], static_cast<int>(*v));
    }
    if (auto vs = validate_config(s.config); !vs.empty()) {
      throw IngestError(row_no, std::string(feature_name(vs.front().feature)), vs.front().message);
    }
    double times[3];
    for (std::size_t t = 0; t < 3; ++t) {
      const auto& name = expected[p + t];
      const auto cell = trim(cells[position[p + t]]);
      const auto v = parse_double(cell);
      if (!v) throw IngestError(row_no, name, name + ": '" + std::string(cell) + "' is not a number");
      if (*v < 0.0) throw IngestError(row_no, name, name + " is negative");
      times[t] = *v;
    }
    s.times = {times[0], times[1], times[2]};
    ds.rows.push_back(s);
  }
  if (ds.rows.empty()) throw IngestError(0, "", "dataset has no rows");

  if (auto it = meta.find("seed"); it != meta.end()) {
    const auto v = parse_int(it->second);
    if (!v || *v < 0) throw IngestError(0, "", "bad seed '" + it->second + "'");
    ds.provenance.seed = static_cast<std::uint64_t>(*v);
  }
  if (auto it = meta.find("profile"); it != meta.end()) ds.provenance.profile = it->second;
  if (auto it = meta.find("generator"); it != meta.end()) ds.provenance.generator = it->second;
  if (auto it = meta.find("source"); it != meta.end()) ds.provenance.imported_from = it->second;
  if (!ds.provenance.seed && ds.provenance.generator.empty() && ds.provenance.imported_from.empty()) {
    ds.provenance.imported_from = source_name;
  }
  return ds;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << format_dataset_csv(ds);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Dataset load_dataset(const std::filesystem::path& path) {
  return parse_dataset_csv(read_file(path.string()), path.filename().string());
}

}  // namespace resperf
