#include "shapprop/engine.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <string>

#include "shapprop/errors.hpp"

namespace shapprop {
namespace detail {

namespace {

inline double coeff(double w, bool squared) { return squared ? w * w : w; }

Tensor dense_map(const LayerSpec& layer, const Tensor& in, bool squared) {
  const std::size_t out_n = layer.weights.dim(0), in_n = layer.weights.dim(1);
  Tensor out(Shape{out_n});
  const double* w = layer.weights.data();
  for (std::size_t o = 0; o < out_n; ++o) {
    double acc = 0.0;
    const double* row = w + o * in_n;
    for (std::size_t j = 0; j < in_n; ++j) acc += coeff(row[j], squared) * in[j];
    out[o] = acc;
  }
  return out;
}

Tensor conv1d_map(const LayerSpec& layer, const Tensor& in, bool squared) {
  const std::size_t kw = layer.weights.dim(0), cin = layer.weights.dim(1),
                    cout = layer.weights.dim(2);
  const std::size_t w_in = in.dim(0), w_out = w_in - kw + 1;
  Tensor out(Shape{w_out, cout});
  for (std::size_t x = 0; x < w_out; ++x) {
    for (std::size_t co = 0; co < cout; ++co) {
      double acc = 0.0;
      for (std::size_t dx = 0; dx < kw; ++dx) {
        for (std::size_t ci = 0; ci < cin; ++ci) {
          acc += coeff(layer.weights.at({dx, ci, co}), squared) * in.at({x + dx, ci});
        }
      }
      out.at({x, co}) = acc;
    }
  }
  return out;
}

Tensor conv2d_map(const LayerSpec& layer, const Tensor& in, bool squared) {
  const std::size_t kh = layer.weights.dim(0), kw = layer.weights.dim(1),
                    cin = layer.weights.dim(2), cout = layer.weights.dim(3);
  const std::size_t h_out = in.dim(0) - kh + 1, w_out = in.dim(1) - kw + 1;
  Tensor out(Shape{h_out, w_out, cout});
  for (std::size_t y = 0; y < h_out; ++y) {
    for (std::size_t x = 0; x < w_out; ++x) {
      for (std::size_t co = 0; co < cout; ++co) {
        double acc = 0.0;
        for (std::size_t dy = 0; dy < kh; ++dy) {
          for (std::size_t dx = 0; dx < kw; ++dx) {
            for (std::size_t ci = 0; ci < cin; ++ci) {
              acc += coeff(layer.weights.at({dy, dx, ci, co}), squared) *
                     in.at({y + dy, x + dx, ci});
            }
          }
        }
        out.at({y, x, co}) = acc;
      }
    }
  }
  return out;
}

// Iterates the cells of one pooling window in row-major order.
template <typename Fn>
void for_each_window_cell(const Shape& in_shape, const std::vector<std::size_t>& window,
                          const std::vector<std::size_t>& out_spatial, const Tensor& in,
                          std::size_t channel, Fn&& fn) {
  const std::size_t spatial = window.size();
  if (spatial == 1) {
    const std::size_t base = out_spatial[0] * window[0];
    for (std::size_t dx = 0; dx < window[0]; ++dx) fn(in.flat_index({base + dx, channel}));
  } else {
    const std::size_t by = out_spatial[0] * window[0], bx = out_spatial[1] * window[1];
    for (std::size_t dy = 0; dy < window[0]; ++dy) {
      for (std::size_t dx = 0; dx < window[1]; ++dx) {
        fn(in.flat_index({by + dy, bx + dx, channel}));
      }
    }
  }
  (void)in_shape;
}

template <typename Fn>
void for_each_window(const LayerSpec& layer, const Tensor& in, const Shape& out_shape, Fn&& fn) {
  const std::size_t spatial = layer.window.size();
  const std::size_t channels = in.shape().back();
  if (spatial == 1) {
    for (std::size_t x = 0; x < out_shape[0]; ++x) {
      for (std::size_t c = 0; c < channels; ++c) fn(std::vector<std::size_t>{x}, c);
    }
  } else {
    for (std::size_t y = 0; y < out_shape[0]; ++y) {
      for (std::size_t x = 0; x < out_shape[1]; ++x) {
        for (std::size_t c = 0; c < channels; ++c) fn(std::vector<std::size_t>{y, x}, c);
      }
    }
  }
}

Tensor avgpool_map(const LayerSpec& layer, const Tensor& in, bool squared) {
  const Shape out_shape = infer_output_shape(layer, in.shape());
  Tensor out(out_shape);
  std::size_t win_n = 1;
  for (std::size_t w : layer.window) win_n *= w;
  const double c = 1.0 / static_cast<double>(win_n);
  const double scale = squared ? c * c : c;
  std::size_t out_flat = 0;
  for_each_window(layer, in, out_shape, [&](const std::vector<std::size_t>& os, std::size_t ch) {
    double acc = 0.0;
    for_each_window_cell(in.shape(), layer.window, os, in, ch,
                         [&](std::size_t flat) { acc += in[flat]; });
    out[out_flat++] = acc * scale;
  });
  return out;
}

Tensor globalavgpool_map(const Tensor& in, bool squared) {
  const std::size_t channels = in.shape().back();
  const std::size_t spatial_n = in.numel() / channels;
  const double c = 1.0 / static_cast<double>(spatial_n);
  const double scale = squared ? c * c : c;
  Tensor out(Shape{channels});
  for (std::size_t i = 0; i < in.numel(); ++i) out[i % channels] += in[i];
  for (std::size_t ch = 0; ch < channels; ++ch) out[ch] *= scale;
  return out;
}

Tensor maxpool_apply(const LayerSpec& layer, const Tensor& in) {
  const Shape out_shape = infer_output_shape(layer, in.shape());
  Tensor out(out_shape);
  std::size_t out_flat = 0;
  for_each_window(layer, in, out_shape, [&](const std::vector<std::size_t>& os, std::size_t ch) {
    double best = -std::numeric_limits<double>::infinity();
    for_each_window_cell(in.shape(), layer.window, os, in, ch, [&](std::size_t flat) {
      if (in[flat] > best) best = in[flat];
    });
    out[out_flat++] = best;
  });
  return out;
}

}  // namespace

Tensor apply_linear_map(const LayerSpec& layer, const Tensor& in, bool squared) {
  switch (layer.kind) {
    case LayerKind::Dense:
      return dense_map(layer, in, squared);
    case LayerKind::Conv1D:
      return conv1d_map(layer, in, squared);
    case LayerKind::Conv2D:
      return conv2d_map(layer, in, squared);
    case LayerKind::AvgPool:
      return avgpool_map(layer, in, squared);
    case LayerKind::GlobalAvgPool:
      return globalavgpool_map(in, squared);
    case LayerKind::Flatten:
      return in.reshaped({in.numel()});
    default:
      throw ShapeError(std::string("layer kind ") + layer_kind_name(layer.kind) +
                       " is not a linear map");
  }
}

void add_bias(const LayerSpec& layer, Tensor& pre) {
  if (layer.bias.numel() == 0) return;
  if (layer.kind == LayerKind::Dense) {
    for (std::size_t o = 0; o < pre.numel(); ++o) pre[o] += layer.bias[o];
  } else {
    // conv bias: one value per output channel (last axis)
    const std::size_t cout = layer.bias.numel();
    for (std::size_t i = 0; i < pre.numel(); ++i) pre[i] += layer.bias[i % cout];
  }
}

Tensor apply_layer(const LayerSpec& layer, const Tensor& in) {
  switch (layer.kind) {
    case LayerKind::Dense:
    case LayerKind::Conv1D:
    case LayerKind::Conv2D: {
      Tensor pre = apply_linear_map(layer, in, false);
      add_bias(layer, pre);
      return pre;
    }
    case LayerKind::Relu: {
      Tensor out = in;
      for (double& v : out.values()) v = v > 0.0 ? v : 0.0;
      return out;
    }
    case LayerKind::MaxPool:
      return maxpool_apply(layer, in);
    case LayerKind::AvgPool:
    case LayerKind::GlobalAvgPool:
    case LayerKind::Flatten:
      return apply_linear_map(layer, in, false);
  }
  throw UnsupportedLayer("unknown layer kind");
}

Tensor backward_layer(const LayerSpec& layer, const Tensor& input_activation,
                      const Tensor& grad_out) {
  Tensor gin(input_activation.shape());
  switch (layer.kind) {
    case LayerKind::Dense: {
      const std::size_t out_n = layer.weights.dim(0), in_n = layer.weights.dim(1);
      const double* w = layer.weights.data();
      for (std::size_t o = 0; o < out_n; ++o) {
        const double g = grad_out[o];
        if (g == 0.0) continue;
        const double* row = w + o * in_n;
        for (std::size_t j = 0; j < in_n; ++j) gin[j] += row[j] * g;
      }
      return gin;
    }
    case LayerKind::Conv1D: {
      const std::size_t kw = layer.weights.dim(0), cin = layer.weights.dim(1),
                        cout = layer.weights.dim(2);
      const std::size_t w_out = grad_out.dim(0);
      for (std::size_t x = 0; x < w_out; ++x) {
        for (std::size_t co = 0; co < cout; ++co) {
          const double g = grad_out.at({x, co});
          if (g == 0.0) continue;
          for (std::size_t dx = 0; dx < kw; ++dx) {
            for (std::size_t ci = 0; ci < cin; ++ci) {
              gin.at({x + dx, ci}) += layer.weights.at({dx, ci, co}) * g;
            }
          }
        }
      }
      return gin;
    }
    case LayerKind::Conv2D: {
      const std::size_t kh = layer.weights.dim(0), kw = layer.weights.dim(1),
                        cin = layer.weights.dim(2), cout = layer.weights.dim(3);
      const std::size_t h_out = grad_out.dim(0), w_out = grad_out.dim(1);
      for (std::size_t y = 0; y < h_out; ++y) {
        for (std::size_t x = 0; x < w_out; ++x) {
          for (std::size_t co = 0; co < cout; ++co) {
            const double g = grad_out.at({y, x, co});
            if (g == 0.0) continue;
            for (std::size_t dy = 0; dy < kh; ++dy) {
              for (std::size_t dx = 0; dx < kw; ++dx) {
                for (std::size_t ci = 0; ci < cin; ++ci) {
                  gin.at({y + dy, x + dx, ci}) += layer.weights.at({dy, dx, ci, co}) * g;
                }
              }
            }
          }
        }
      }
      return gin;
    }
    case LayerKind::Relu:
      for (std::size_t i = 0; i < gin.numel(); ++i) {
        gin[i] = input_activation[i] > 0.0 ? grad_out[i] : 0.0;
      }
      return gin;
    case LayerKind::MaxPool: {
      const Shape out_shape = infer_output_shape(layer, input_activation.shape());
      std::size_t out_flat = 0;
      for_each_window(layer, input_activation, out_shape,
                      [&](const std::vector<std::size_t>& os, std::size_t ch) {
                        double best = -std::numeric_limits<double>::infinity();
                        std::size_t best_flat = 0;
                        for_each_window_cell(input_activation.shape(), layer.window, os,
                                             input_activation, ch, [&](std::size_t flat) {
                                               if (input_activation[flat] > best) {
                                                 best = input_activation[flat];
                                                 best_flat = flat;
                                               }
                                             });
                        gin[best_flat] += grad_out[out_flat++];
                      });
      return gin;
    }
    case LayerKind::AvgPool: {
      const Shape out_shape = infer_output_shape(layer, input_activation.shape());
      std::size_t win_n = 1;
      for (std::size_t w : layer.window) win_n *= w;
      const double c = 1.0 / static_cast<double>(win_n);
      std::size_t out_flat = 0;
      for_each_window(layer, input_activation, out_shape,
                      [&](const std::vector<std::size_t>& os, std::size_t ch) {
                        const double g = grad_out[out_flat++] * c;
                        for_each_window_cell(input_activation.shape(), layer.window, os,
                                             input_activation, ch,
                                             [&](std::size_t flat) { gin[flat] += g; });
                      });
      return gin;
    }
    case LayerKind::GlobalAvgPool: {
      const std::size_t channels = input_activation.shape().back();
      const double c = 1.0 / static_cast<double>(input_activation.numel() / channels);
      for (std::size_t i = 0; i < gin.numel(); ++i) gin[i] = grad_out[i % channels] * c;
      return gin;
    }
    case LayerKind::Flatten:
      return grad_out.reshaped(input_activation.shape());
  }
  throw UnsupportedLayer("unknown layer kind");
}

}  // namespace detail

namespace {

void check_input_shape(const Model& model, const Tensor& x) {
  if (x.shape() != model.input_shape) {
    throw ShapeError("input shape " + shape_to_string(x.shape()) +
                     " does not match model input " + shape_to_string(model.input_shape));
  }
}

}  // namespace

Tensor forward(const Model& model, const Tensor& x) {
  check_input_shape(model, x);
  Tensor act = x;
  for (const LayerSpec& layer : model.layers) act = detail::apply_layer(layer, act);
  return act;
}

Tensor forward(const Model& model, const Tensor& x, EvalCounter& counter) {
  Tensor out = forward(model, x);
  counter.add(1.0);
  return out;
}

Tensor forward_from(const Model& model, std::size_t start_index, const Tensor& activation) {
  if (start_index > model.layers.size()) {
    throw ShapeError("layer index out of range");
  }
  if (activation.shape() != model.activation_shapes[start_index]) {
    throw ShapeError("activation shape " + shape_to_string(activation.shape()) +
                     " does not match layer " + std::to_string(start_index) + " input " +
                     shape_to_string(model.activation_shapes[start_index]));
  }
  Tensor act = activation;
  for (std::size_t i = start_index; i < model.layers.size(); ++i) {
    act = detail::apply_layer(model.layers[i], act);
  }
  return act;
}

Tensor gradient(const Model& model, const Tensor& x, std::size_t class_index) {
  check_input_shape(model, x);
  if (class_index >= model.output_dim) {
    throw ShapeError("class index " + std::to_string(class_index) + " out of range, C = " +
                     std::to_string(model.output_dim));
  }
  std::vector<Tensor> acts;
  acts.reserve(model.layers.size() + 1);
  acts.push_back(x);
  for (const LayerSpec& layer : model.layers) {
    acts.push_back(detail::apply_layer(layer, acts.back()));
  }
  Tensor grad(acts.back().shape());
  grad[class_index] = 1.0;
  for (std::size_t i = model.layers.size(); i-- > 0;) {
    grad = detail::backward_layer(model.layers[i], acts[i], grad);
  }
  return grad;
}

Tensor gradient(const Model& model, const Tensor& x, std::size_t class_index,
                EvalCounter& counter) {
  Tensor g = gradient(model, x, class_index);
  counter.add(2.0);
  return g;
}

}  // namespace shapprop
