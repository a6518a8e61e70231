#include "resperf/model_io.hpp"

#include <fstream>

#include "json.hpp"

#include "resperf/text_util.hpp"

namespace resperf {

using nlohmann::json;

namespace {

json tensor_to_json(const Tensor& t) {
  return {{"shape", t.shape()}, {"values", std::vector<double>(t.values().begin(), t.values().end())}};
}

Tensor tensor_from_json(const json& j) {
  auto shape = j.at("shape").get<Tensor::Shape>();
  auto values = j.at("values").get<std::vector<double>>();
  if (shape_product(shape) != values.size()) throw ModelFormatError("tensor shape does not match its values");
  return Tensor(std::move(shape), std::move(values));
}

json hyperparams_to_json(const Hyperparams& hp) {
  return {{"total_epochs", hp.total_epochs}, {"lr", hp.lr},
          {"batch_size", hp.batch_size},     {"decay_period", hp.decay_period},
          {"decay_factor", hp.decay_factor}, {"l2", hp.l2},
          {"scaler", hp.scaler},             {"seed", hp.seed},
          {"boxcox", hp.boxcox},             {"split_ratio", hp.split_ratio},
          {"adam_beta1", hp.adam_beta1},     {"adam_beta2", hp.adam_beta2},
          {"adam_epsilon", hp.adam_epsilon}};
}

Hyperparams hyperparams_from_json(const json& j) {
  Hyperparams hp;
  hp.total_epochs = j.at("total_epochs").get<int>();
  hp.lr = j.at("lr").get<double>();
  hp.batch_size = j.at("batch_size").get<std::size_t>();
  hp.decay_period = j.at("decay_period").get<int>();
  hp.decay_factor = j.at("decay_factor").get<double>();
  hp.l2 = j.at("l2").get<double>();
  hp.scaler = j.at("scaler").get<double>();
  hp.seed = j.at("seed").get<std::uint64_t>();
  hp.boxcox = j.at("boxcox").get<bool>();
  hp.split_ratio = j.at("split_ratio").get<double>();
  hp.adam_beta1 = j.at("adam_beta1").get<double>();
  hp.adam_beta2 = j.at("adam_beta2").get<double>();
  hp.adam_epsilon = j.at("adam_epsilon").get<double>();
  return hp;
}

json transform_to_json(const TransformerState& s) {
  json boxcox = json::array();
  for (std::size_t i = 0; i < s.boxcox_features.size(); ++i) {
    boxcox.push_back({{"feature", feature_name(s.boxcox_features[i])}, {"lambda", s.boxcox_lambdas[i]}});
  }
  return {{"kind", to_string(s.kind)}, {"schema_version", s.schema_version},
          {"scaler", s.scaler},        {"mean", s.mean},
          {"stddev", s.stddev},        {"boxcox", boxcox},
          {"fitted", s.fitted}};
}

LayerKind kind_from_json(const json& j) {
  const auto text = j.get<std::string>();
  auto kind = parse_layer_kind(text);
  if (!kind) throw ModelFormatError("unknown layer kind '" + text + "'");
  return *kind;
}

TransformerState transform_from_json(const json& j) {
  TransformerState s;
  s.kind = kind_from_json(j.at("kind"));
  s.schema_version = j.at("schema_version").get<std::string>();
  s.scaler = j.at("scaler").get<double>();
  s.mean = j.at("mean").get<std::vector<double>>();
  s.stddev = j.at("stddev").get<std::vector<double>>();
  for (const auto& b : j.at("boxcox")) {
    const auto name = b.at("feature").get<std::string>();
    auto f = parse_feature(name);
    if (!f) throw ModelFormatError("unknown Box-Cox feature '" + name + "'");
    s.boxcox_features.push_back(*f);
    s.boxcox_lambdas.push_back(b.at("lambda").get<double>());
  }
  s.fitted = j.at("fitted").get<bool>();
  const auto p = schema_for(s.kind).size();
  if (s.mean.size() != p || s.stddev.size() != p) {
    throw ModelFormatError("transformer statistics do not match the feature schema");
  }
  return s;
}

json network_to_json(const Network& net) {
  json layers = json::array();
  for (const auto& spec : net.specs()) {
    json l = {{"op", to_string(spec.op)}};
    switch (spec.op) {
      case OpKind::Conv1D: l["units"] = spec.units; l["kernel"] = spec.kernel; break;
      case OpKind::Dense: l["units"] = spec.units; break;
      case OpKind::Add: l["source"] = spec.source; break;
      case OpKind::Dropout: l["rate"] = spec.rate; break;
      case OpKind::ReLU:
      case OpKind::Flatten: break;
    }
    layers.push_back(std::move(l));
  }
  json params = json::array();
  for (const auto& p : net.params()) {
    if (p.weight.empty()) {
      params.push_back(nullptr);
    } else {
      params.push_back({{"weight", tensor_to_json(p.weight)}, {"bias", tensor_to_json(p.bias)}});
    }
  }
  return {{"input_shape", net.input_shape()}, {"layers", layers}, {"params", params}};
}

Network network_from_json(const json& j) {
  std::vector<LayerSpec> specs;
  for (const auto& l : j.at("layers")) {
    const auto op = l.at("op").get<std::string>();
    if (op == to_string(OpKind::Conv1D)) {
      specs.push_back(LayerSpec::conv1d(l.at("units").get<std::size_t>(), l.at("kernel").get<std::size_t>()));
    } else if (op == to_string(OpKind::Dense)) {
      specs.push_back(LayerSpec::dense(l.at("units").get<std::size_t>()));
    } else if (op == to_string(OpKind::Add)) {
      specs.push_back(LayerSpec::add(l.at("source").get<std::size_t>()));
    } else if (op == to_string(OpKind::Dropout)) {
      specs.push_back(LayerSpec::dropout(l.at("rate").get<double>()));
    } else if (op == to_string(OpKind::ReLU)) {
      specs.push_back(LayerSpec::relu());
    } else if (op == to_string(OpKind::Flatten)) {
      specs.push_back(LayerSpec::flatten());
    } else {
      throw ModelFormatError("unknown layer op '" + op + "'");
    }
  }
  std::vector<LayerParams> params;
  for (const auto& p : j.at("params")) {
    if (p.is_null()) {
      params.emplace_back();
    } else {
      params.push_back({tensor_from_json(p.at("weight")), tensor_from_json(p.at("bias"))});
    }
  }
  try {
    return Network(std::move(specs), j.at("input_shape").get<Tensor::Shape>(), std::move(params));
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(std::string("inconsistent network: ") + e.what());
  }
}

json history_to_json(const std::vector<EpochRecord>& history) {
  json out = json::array();
  for (const auto& r : history) {
    out.push_back({{"epoch", r.epoch},           {"lr", r.lr},
                   {"train_maple", r.train_maple}, {"test_maple", r.test_maple},
                   {"test_mape", r.test_mape},     {"test_rmse", r.test_rmse}});
  }
  return out;
}

std::vector<EpochRecord> history_from_json(const json& j) {
  std::vector<EpochRecord> out;
  for (const auto& r : j) {
    out.push_back({r.at("epoch").get<int>(), r.at("lr").get<double>(),
                   r.at("train_maple").get<double>(), r.at("test_maple").get<double>(),
                   r.at("test_mape").get<double>(), r.at("test_rmse").get<double>()});
  }
  return out;
}

}  // namespace

std::string format_model(const TrainedPhaseModel& model) {
  json doc = {{"format", kModelFormat},
              {"model_type", to_string(model.type)},
              {"kind", to_string(model.kind)},
              {"phase", to_string(model.phase)},
              {"schema_version", model.schema_version},
              {"hyperparams", hyperparams_to_json(model.hyperparams)},
              {"transform", transform_to_json(model.transform)},
              {"history", history_to_json(model.history)}};
  if (model.type == ModelType::Poly) {
    doc["poly"] = {{"degree", model.poly.degree},
                   {"ridge", model.poly.ridge},
                   {"coefficients", model.poly.coefficients}};
  } else {
    doc["network"] = network_to_json(model.network);
  }
  return doc.dump(1) + "\n";
}

TrainedPhaseModel parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelFormatError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kModelFormat) {
      throw ModelFormatError("unsupported model format '" + doc.at("format").get<std::string>() + "'");
    }
    TrainedPhaseModel m;
    m.schema_version = doc.at("schema_version").get<std::string>();
    if (m.schema_version != kSchemaVersion) {
      throw ModelFormatError("model feature schema " + m.schema_version + " does not match " +
                             std::string(kSchemaVersion));
    }
    const auto type = doc.at("model_type").get<std::string>();
    const auto parsed_type = parse_model_type(type);
    if (!parsed_type) throw ModelFormatError("unknown model type '" + type + "'");
    m.type = *parsed_type;
    m.kind = kind_from_json(doc.at("kind"));
    const auto phase = parse_phase_kind(doc.at("phase").get<std::string>());
    if (!phase) throw ModelFormatError("unknown phase");
    m.phase = *phase;
    m.hyperparams = hyperparams_from_json(doc.at("hyperparams"));
    m.transform = transform_from_json(doc.at("transform"));
    if (m.transform.kind != m.kind) throw ModelFormatError("transformer kind differs from model kind");
    m.history = history_from_json(doc.at("history"));
    if (m.type == ModelType::Poly) {
      const auto& poly = doc.at("poly");
      m.poly.degree = poly.at("degree").get<int>();
      m.poly.ridge = poly.at("ridge").get<double>();
      m.poly.coefficients = poly.at("coefficients").get<std::vector<double>>();
      if (m.poly.coefficients.size() !=
          expanded_feature_count(schema_for(m.kind).size(), m.poly.degree) + 1) {
        throw ModelFormatError("polynomial coefficient count does not match the schema");
      }
    } else {
      m.network = network_from_json(doc.at("network"));
      if (m.network.input_length() != schema_for(m.kind).size()) {
        throw ModelFormatError("network input length does not match the feature schema");
      }
    }
    return m;
  } catch (const json::exception& e) {
    throw ModelFormatError(std::string("malformed model file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const TrainedPhaseModel& model, const std::filesystem::path& path) {
  const auto text = format_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

TrainedPhaseModel load_model(const std::filesystem::path& path) {
  return parse_model(read_file(path.string()));
}

}  // namespace resperf
