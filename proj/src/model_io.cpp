#include "shapprop/model_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "shapprop/errors.hpp"

namespace shapprop {

namespace {

using nlohmann::json;

double number_or_throw(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

// Parses a rectangular nested array into (shape, flat row-major data).
void parse_nested(const json& j, std::size_t depth, Shape& shape, std::vector<double>& flat,
                  const std::string& where) {
  if (j.is_array()) {
    if (depth == shape.size()) {
      shape.push_back(j.size());
    } else if (shape[depth] != j.size()) {
      throw ParseError(where + ": ragged nested array");
    }
    if (j.empty()) throw ParseError(where + ": empty array dimension");
    for (const json& child : j) parse_nested(child, depth + 1, shape, flat, where);
  } else {
    if (depth != shape.size()) throw ParseError(where + ": inconsistent nesting depth");
    flat.push_back(number_or_throw(j, where));
  }
}

Tensor parse_tensor(const json& j, std::size_t expected_rank, const std::string& where) {
  Shape shape;
  std::vector<double> flat;
  parse_nested(j, 0, shape, flat, where);
  if (shape.size() != expected_rank) {
    throw ParseError(where + ": expected rank-" + std::to_string(expected_rank) +
                     " nested array, got rank-" + std::to_string(shape.size()));
  }
  if (flat.size() != shape_numel(shape)) throw ParseError(where + ": ragged nested array");
  return Tensor(std::move(shape), std::move(flat));
}

void check_layer_keys(const json& layer, std::initializer_list<const char*> allowed,
                      const std::string& where) {
  for (const auto& [key, value] : layer.items()) {
    bool ok = false;
    for (const char* a : allowed) {
      if (key == a) {
        ok = true;
        break;
      }
    }
    if (!ok) throw ParseError(where + ": unknown key \"" + key + "\"");
  }
}

LayerSpec parse_layer(const json& j, std::size_t index) {
  const std::string where = "layers[" + std::to_string(index) + "]";
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw ParseError(where + ": missing \"kind\"");
  }
  LayerSpec layer;
  layer.kind = layer_kind_from_name(j["kind"].get<std::string>());
  switch (layer.kind) {
    case LayerKind::Dense:
    case LayerKind::Conv1D:
    case LayerKind::Conv2D: {
      check_layer_keys(j, {"kind", "weights", "bias"}, where);
      if (!j.contains("weights") || !j.contains("bias")) {
        throw ParseError(where + ": parametric layer needs \"weights\" and \"bias\"");
      }
      const std::size_t rank =
          layer.kind == LayerKind::Dense ? 2 : (layer.kind == LayerKind::Conv1D ? 3 : 4);
      layer.weights = parse_tensor(j["weights"], rank, where + ".weights");
      layer.bias = parse_tensor(j["bias"], 1, where + ".bias");
      break;
    }
    case LayerKind::MaxPool:
    case LayerKind::AvgPool: {
      check_layer_keys(j, {"kind", "window"}, where);
      if (!j.contains("window") || !j["window"].is_array() || j["window"].empty()) {
        throw ParseError(where + ": pooling layer needs a \"window\" array");
      }
      for (const json& w : j["window"]) {
        if (!w.is_number_integer() || w.get<long long>() < 1) {
          throw ParseError(where + ".window: entries must be positive integers");
        }
        layer.window.push_back(w.get<std::size_t>());
      }
      break;
    }
    case LayerKind::Relu:
    case LayerKind::GlobalAvgPool:
    case LayerKind::Flatten:
      check_layer_keys(j, {"kind"}, where);
      break;
  }
  return layer;
}

json tensor_to_nested(const Tensor& t, std::size_t axis, std::size_t offset) {
  json out = json::array();
  if (axis + 1 == t.rank()) {
    for (std::size_t i = 0; i < t.dim(axis); ++i) out.push_back(t[offset + i]);
    return out;
  }
  std::size_t stride = 1;
  for (std::size_t a = axis + 1; a < t.rank(); ++a) stride *= t.dim(a);
  for (std::size_t i = 0; i < t.dim(axis); ++i) {
    out.push_back(tensor_to_nested(t, axis + 1, offset + i * stride));
  }
  return out;
}

}  // namespace

Model parse_model_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("input_shape") || !j.contains("layers")) {
    throw ParseError("model file must be an object with \"input_shape\" and \"layers\"");
  }
  for (const auto& [key, value] : j.items()) {
    if (key != "input_shape" && key != "layers") {
      throw ParseError("model file: unknown key \"" + key + "\"");
    }
  }
  Model model;
  if (!j["input_shape"].is_array() || j["input_shape"].empty()) {
    throw ParseError("\"input_shape\" must be a non-empty array");
  }
  for (const json& d : j["input_shape"]) {
    if (!d.is_number_integer() || d.get<long long>() < 1) {
      throw ParseError("\"input_shape\" entries must be positive integers");
    }
    model.input_shape.push_back(d.get<std::size_t>());
  }
  if (!j["layers"].is_array()) throw ParseError("\"layers\" must be an array");
  for (std::size_t i = 0; i < j["layers"].size(); ++i) {
    model.layers.push_back(parse_layer(j["layers"][i], i));
  }
  model.validate();
  return model;
}

Model load_model(const std::string& path) {
  if (!std::filesystem::exists(path)) throw FileNotFound("model file not found: " + path);
  std::ifstream in(path);
  if (!in) throw FileNotFound("cannot open model file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_model_json(buf.str());
}

std::string model_to_json(const Model& model) {
  json j;
  j["input_shape"] = model.input_shape;
  j["layers"] = json::array();
  for (const LayerSpec& layer : model.layers) {
    json lj;
    lj["kind"] = layer_kind_name(layer.kind);
    switch (layer.kind) {
      case LayerKind::Dense:
      case LayerKind::Conv1D:
      case LayerKind::Conv2D:
        lj["weights"] = tensor_to_nested(layer.weights, 0, 0);
        lj["bias"] = tensor_to_nested(layer.bias, 0, 0);
        break;
      case LayerKind::MaxPool:
      case LayerKind::AvgPool:
        lj["window"] = layer.window;
        break;
      default:
        break;
    }
    j["layers"].push_back(lj);
  }
  return j.dump(2) + "\n";
}

void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FileNotFound("cannot write model file: " + path);
  out << model_to_json(model);
}

}  // namespace shapprop
