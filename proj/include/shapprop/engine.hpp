#pragma once

#include <vector>

#include "shapprop/eval_counter.hpp"
#include "shapprop/model.hpp"
#include "shapprop/tensor.hpp"

namespace shapprop {

/// Deterministic forward pass f(x). Counts 1 forward-equivalent.
Tensor forward(const Model& model, const Tensor& x, EvalCounter& counter);

/// Forward pass without budget accounting (internal/test use).
Tensor forward(const Model& model, const Tensor& x);

/// Forward pass starting at layer `start_index` from an intermediate activation.
Tensor forward_from(const Model& model, std::size_t start_index, const Tensor& activation);

/// d f_c / d x via reverse accumulation. ReLU subgradient at 0 is 0;
/// max-pool ties route to the lowest flat index inside the window.
/// Counts 2 forward-equivalents (one forward + one backward pass).
Tensor gradient(const Model& model, const Tensor& x, std::size_t class_index,
                EvalCounter& counter);

Tensor gradient(const Model& model, const Tensor& x, std::size_t class_index);

namespace detail {

/// Applies the linear part of a layer (dense/conv/avgpool/globalavgpool/flatten)
/// with no bias. With `squared_coefficients` every matrix coefficient is
/// squared first, which is the variance map of the same linear operation.
Tensor apply_linear_map(const LayerSpec& layer, const Tensor& in, bool squared_coefficients);

/// Adds a dense/conv bias onto a no-bias pre-activation.
void add_bias(const LayerSpec& layer, Tensor& pre);

/// Full deterministic application of one layer.
Tensor apply_layer(const LayerSpec& layer, const Tensor& in);

/// Gradient of one layer: input gradient from output gradient.
Tensor backward_layer(const LayerSpec& layer, const Tensor& input_activation,
                      const Tensor& grad_out);

}  // namespace detail

}  // namespace shapprop
