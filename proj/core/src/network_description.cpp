#include "resperf/network_description.hpp"

#include "json.hpp"
#include "resperf/text_util.hpp"

namespace resperf {

using nlohmann::json;

namespace {

int field_value(const json& value, Feature f, std::size_t index) {
  const std::string where = "layer " + std::to_string(index) + ": " + std::string(feature_name(f));
  if (value.is_string()) {
    const auto s = value.get<std::string>();
    if (f == Feature::Padding && (s == "valid" || s == "same")) return s == "same" ? 1 : 0;
    if (f == Feature::Activation && (s == "none" || s == "relu")) return s == "relu" ? 1 : 0;
    throw DescriptionError(where + " has unsupported value '" + s + "'");
  }
  if (value.is_boolean()) return value.get<bool>() ? 1 : 0;
  if (!value.is_number_integer()) throw DescriptionError(where + " must be an integer");
  return value.get<int>();
}

}  // namespace

NetworkDescription NetworkDescription::with_batch(int batch_size) const {
  NetworkDescription out = *this;
  for (auto& l : out.layers) l.batch_size = batch_size;
  return out;
}

NetworkDescription parse_network_description(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DescriptionError(std::string("network description is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("layers") || !doc["layers"].is_array()) {
    throw DescriptionError("network description needs a \"layers\" array");
  }
  NetworkDescription desc;
  desc.name = doc.value("name", std::string("network"));
  std::optional<int> batch;
  if (doc.contains("batch_size")) batch = field_value(doc["batch_size"], Feature::BatchSize, 0);

  const auto& layers = doc["layers"];
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    if (!l.is_object() || !l.contains("type") || !l["type"].is_string()) {
      throw DescriptionError("layer " + std::to_string(i) + ": missing \"type\"");
    }
    const auto type = l["type"].get<std::string>();
    if (type == "relu" || type == "flatten") {
      if (desc.layers.empty()) {
        throw DescriptionError("layer " + std::to_string(i) + ": " + type +
                               " has no preceding layer to fold into");
      }
      if (type == "relu") desc.layers.back().activation = 1;
      continue;
    }
    const auto kind = parse_layer_kind(type);
    if (!kind) throw DescriptionError("layer " + std::to_string(i) + ": unsupported type '" + type + "'");

    LayerConfig cfg;
    cfg.kind = *kind;
    const auto& schema = schema_for(*kind);
    for (const auto& [key, value] : l.items()) {
      if (key == "type" || key == "note") continue;
      const auto f = parse_feature(key);
      if (!f || !schema.index_of(*f)) {
        throw DescriptionError("layer " + std::to_string(i) + ": field '" + key +
                               "' does not apply to " + type + " layers");
      }
      set_feature_value(cfg, *f, field_value(value, *f, i));
    }
    if (batch) cfg.batch_size = *batch;
    if (auto vs = validate_config(cfg); !vs.empty()) {
      throw DescriptionError("layer " + std::to_string(i) + ": " + vs.front().message);
    }
    desc.layers.push_back(cfg);
  }
  if (desc.layers.empty()) throw DescriptionError("network description has no layers");
  return desc;
}

NetworkDescription load_network_description(const std::filesystem::path& path) {
  return parse_network_description(read_file(path.string()));
}

}  // namespace resperf
