#pragma once

#include <string>

#include "shapprop/model.hpp"

namespace shapprop {

/// Loads and shape-validates a model from its JSON file format:
///   {"input_shape":[...], "layers":[{"kind":"dense","weights":[[...]],"bias":[...]}, ...]}
/// Dense weights are nested [out][in]; conv1d [kw][cin][cout]; conv2d
/// [kh][kw][cin][cout]; pooling layers carry "window":[...]. Unknown keys
/// at layer level are rejected.
/// Throws FileNotFound, ParseError, UnsupportedLayer, ShapeError.
Model load_model(const std::string& path);

Model parse_model_json(const std::string& text);

/// Serializes a model back to the same format.
std::string model_to_json(const Model& model);
void save_model(const Model& model, const std::string& path);

}  // namespace shapprop
