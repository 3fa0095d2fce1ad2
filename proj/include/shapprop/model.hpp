#pragma once

#include <string>
#include <vector>

#include "shapprop/tensor.hpp"

namespace shapprop {

enum class LayerKind {
  Dense,
  Conv1D,
  Conv2D,
  Relu,
  MaxPool,
  AvgPool,
  GlobalAvgPool,
  Flatten,
};

const char* layer_kind_name(LayerKind kind);
LayerKind layer_kind_from_name(const std::string& name);  // throws UnsupportedLayer

/// One layer of the network.
///   Dense:  weights [out, in], bias [out], rank-1 input.
///   Conv1D: weights [kw, cin, cout], bias [cout], input [w, cin], stride 1, valid.
///   Conv2D: weights [kh, kw, cin, cout], bias [cout], input [h, w, cin], stride 1, valid.
///   MaxPool/AvgPool: window [ww] or [wh, ww], stride = window, window must
///     divide the spatial dims.
///   Relu / GlobalAvgPool / Flatten: no parameters.
struct LayerSpec {
  LayerKind kind = LayerKind::Dense;
  Tensor weights;
  Tensor bias;
  std::vector<std::size_t> window;

  bool is_parametric() const { return kind == LayerKind::Dense || kind == LayerKind::Conv1D || kind == LayerKind::Conv2D; }
};

/// Output shape of `layer` applied to `input`; throws ShapeError if illegal.
Shape infer_output_shape(const LayerSpec& layer, const Shape& input);

/// A shape-checked feed-forward network. Immutable after validate().
struct Model {
  Shape input_shape;
  std::vector<LayerSpec> layers;

  // Filled in by validate():
  std::vector<Shape> activation_shapes;  // activation_shapes[0] = input_shape,
                                         // activation_shapes[i+1] = output of layers[i]
  std::size_t output_dim = 0;            // C, length of the final vector
  int first_parametric = -1;             // index of the first dense/conv layer, -1 if none

  std::size_t num_features() const { return shape_numel(input_shape); }

  /// Shape-checks the whole chain and fills the derived fields.
  /// Throws ShapeError if the model has no layers, if any layer is
  /// inconsistent with its input, or if the chain does not end in a
  /// rank-1 vector.
  void validate();
};

}  // namespace shapprop
