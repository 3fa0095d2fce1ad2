#include "shapprop/model.hpp"

#include <array>
#include <utility>

#include "shapprop/errors.hpp"

namespace shapprop {

namespace {

const std::array<std::pair<const char*, LayerKind>, 8> kKindNames = {{
    {"dense", LayerKind::Dense},
    {"conv1d", LayerKind::Conv1D},
    {"conv2d", LayerKind::Conv2D},
    {"relu", LayerKind::Relu},
    {"maxpool", LayerKind::MaxPool},
    {"avgpool", LayerKind::AvgPool},
    {"globalavgpool", LayerKind::GlobalAvgPool},
    {"flatten", LayerKind::Flatten},
}};

void require(bool ok, const std::string& message) {
  if (!ok) throw ShapeError(message);
}

}  // namespace

const char* layer_kind_name(LayerKind kind) {
  for (const auto& [name, k] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

LayerKind layer_kind_from_name(const std::string& name) {
  for (const auto& [n, k] : kKindNames) {
    if (name == n) return k;
  }
  throw UnsupportedLayer("unsupported layer kind \"" + name + "\"");
}

Shape infer_output_shape(const LayerSpec& layer, const Shape& input) {
  const std::string kind = layer_kind_name(layer.kind);
  switch (layer.kind) {
    case LayerKind::Dense: {
      require(layer.weights.rank() == 2, "dense weights must be a 2-d [out, in] tensor");
      require(input.size() == 1, "dense layer expects a rank-1 input, got " + shape_to_string(input));
      const std::size_t out = layer.weights.dim(0), in = layer.weights.dim(1);
      require(out >= 1 && in >= 1, "dense weights must be non-empty");
      require(in == input[0], "dense weights expect " + std::to_string(in) + " inputs, got " +
                                  std::to_string(input[0]));
      require(layer.bias.shape() == Shape{out},
              "dense bias length must equal the number of output rows");
      return {out};
    }
    case LayerKind::Conv1D: {
      require(layer.weights.rank() == 3, "conv1d weights must be [kw, cin, cout]");
      require(input.size() == 2, "conv1d expects a [w, cin] input, got " + shape_to_string(input));
      const std::size_t kw = layer.weights.dim(0), cin = layer.weights.dim(1),
                        cout = layer.weights.dim(2);
      require(kw >= 1 && cin >= 1 && cout >= 1, "conv1d kernel must be non-empty");
      require(cin == input[1], "conv1d kernel expects " + std::to_string(cin) + " channels");
      require(kw <= input[0], "conv1d kernel wider than input");
      require(layer.bias.shape() == Shape{cout}, "conv1d bias length must equal cout");
      return {input[0] - kw + 1, cout};
    }
    case LayerKind::Conv2D: {
      require(layer.weights.rank() == 4, "conv2d weights must be [kh, kw, cin, cout]");
      require(input.size() == 3, "conv2d expects a [h, w, cin] input, got " + shape_to_string(input));
      const std::size_t kh = layer.weights.dim(0), kw = layer.weights.dim(1),
                        cin = layer.weights.dim(2), cout = layer.weights.dim(3);
      require(kh >= 1 && kw >= 1 && cin >= 1 && cout >= 1, "conv2d kernel must be non-empty");
      require(cin == input[2], "conv2d kernel expects " + std::to_string(cin) + " channels");
      require(kh <= input[0] && kw <= input[1], "conv2d kernel larger than input");
      require(layer.bias.shape() == Shape{cout}, "conv2d bias length must equal cout");
      return {input[0] - kh + 1, input[1] - kw + 1, cout};
    }
    case LayerKind::Relu:
      require(layer.weights.numel() == 0 && layer.bias.numel() == 0 && layer.window.empty(),
              "relu carries no parameters");
      return input;
    case LayerKind::MaxPool:
    case LayerKind::AvgPool: {
      require(layer.weights.numel() == 0 && layer.bias.numel() == 0,
              kind + " carries no weights");
      require(input.size() >= 2, kind + " expects a [w, c] or [h, w, c] input");
      const std::size_t spatial = input.size() - 1;
      require(layer.window.size() == spatial,
              kind + " window rank must match the input's spatial rank");
      Shape out = input;
      for (std::size_t a = 0; a < spatial; ++a) {
        require(layer.window[a] >= 1, kind + " window must be positive");
        require(input[a] % layer.window[a] == 0,
                kind + " window " + std::to_string(layer.window[a]) +
                    " must divide spatial dim " + std::to_string(input[a]));
        out[a] = input[a] / layer.window[a];
      }
      return out;
    }
    case LayerKind::GlobalAvgPool:
      require(layer.weights.numel() == 0 && layer.bias.numel() == 0 && layer.window.empty(),
              "globalavgpool carries no parameters");
      require(input.size() >= 2, "globalavgpool expects a [w, c] or [h, w, c] input");
      return {input.back()};
    case LayerKind::Flatten:
      require(layer.weights.numel() == 0 && layer.bias.numel() == 0 && layer.window.empty(),
              "flatten carries no parameters");
      return {shape_numel(input)};
  }
  throw UnsupportedLayer("unknown layer kind");
}

void Model::validate() {
  require(!input_shape.empty() && shape_numel(input_shape) >= 1,
          "model input shape must be non-empty");
  for (std::size_t d : input_shape) require(d >= 1, "input shape dims must be positive");
  require(!layers.empty(), "model must have at least one layer");

  activation_shapes.clear();
  activation_shapes.reserve(layers.size() + 1);
  activation_shapes.push_back(input_shape);
  first_parametric = -1;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    activation_shapes.push_back(infer_output_shape(layers[i], activation_shapes.back()));
    if (first_parametric < 0 && layers[i].is_parametric()) {
      first_parametric = static_cast<int>(i);
    }
  }
  require(activation_shapes.back().size() == 1,
          "model must end in a rank-1 output vector, got " +
              shape_to_string(activation_shapes.back()));
  output_dim = activation_shapes.back()[0];
}

}  // namespace shapprop
