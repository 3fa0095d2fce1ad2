#include "shapprop/probnet.hpp"

#include <limits>
#include <string>

#include "shapprop/engine.hpp"
#include "shapprop/errors.hpp"

namespace shapprop {

namespace {

void check_gaussian(const GaussianActivation& g) {
  if (!g.mean.same_shape(g.variance)) {
    throw ShapeError("Gaussian activation mean/variance shapes differ");
  }
}

}  // namespace

GaussianActivation::GaussianActivation(Tensor mean_, Tensor variance_)
    : mean(std::move(mean_)), variance(std::move(variance_)) {
  check_gaussian(*this);
  for (double& v : variance.values()) {
    if (v < 0.0) v = 0.0;  // clamp cancellation residue
  }
}

GaussianActivation GaussianActivation::point_mass(const Tensor& x) {
  return GaussianActivation(x, Tensor(x.shape()));
}

GaussianActivation propagate_linear(const LayerSpec& layer, const GaussianActivation& g) {
  check_gaussian(g);
  Tensor mean = detail::apply_linear_map(layer, g.mean, false);
  detail::add_bias(layer, mean);
  Tensor var = detail::apply_linear_map(layer, g.variance, true);
  return GaussianActivation(std::move(mean), std::move(var));
}

GaussianActivation propagate_relu(const GaussianActivation& g) {
  check_gaussian(g);
  GaussianActivation out = g;
  for (std::size_t i = 0; i < out.mean.numel(); ++i) {
    const MomentPair m = relu_gaussian_moments({g.mean[i], g.variance[i]});
    out.mean[i] = m.mean;
    out.variance[i] = m.variance;
  }
  return out;
}

GaussianActivation propagate_max(const LayerSpec& layer, const GaussianActivation& g) {
  check_gaussian(g);
  if (layer.kind != LayerKind::MaxPool) throw ShapeError("propagate_max expects a maxpool layer");
  const Shape out_shape = infer_output_shape(layer, g.mean.shape());
  GaussianActivation out(Tensor(out_shape), Tensor(out_shape));

  const std::size_t spatial = layer.window.size();
  const std::size_t channels = g.mean.shape().back();
  const std::size_t out_numel = shape_numel(out_shape);
  for (std::size_t flat = 0; flat < out_numel; ++flat) {
    // decode output position, gather the window's flat indices in row-major order
    std::vector<std::size_t> out_idx(spatial + 1);
    std::size_t rem = flat;
    out_idx[spatial] = rem % channels;
    rem /= channels;
    if (spatial == 2) {
      out_idx[1] = rem % out_shape[1];
      rem /= out_shape[1];
    }
    out_idx[0] = rem;

    std::vector<std::size_t> cells;
    if (spatial == 1) {
      for (std::size_t dx = 0; dx < layer.window[0]; ++dx) {
        cells.push_back(g.mean.flat_index({out_idx[0] * layer.window[0] + dx, out_idx[1]}));
      }
    } else {
      for (std::size_t dy = 0; dy < layer.window[0]; ++dy) {
        for (std::size_t dx = 0; dx < layer.window[1]; ++dx) {
          cells.push_back(g.mean.flat_index({out_idx[0] * layer.window[0] + dy,
                                             out_idx[1] * layer.window[1] + dx, out_idx[2]}));
        }
      }
    }

    MomentPair acc{g.mean[cells[0]], g.variance[cells[0]]};
    for (std::size_t i = 1; i < cells.size(); ++i) {
      acc = max_pair_moments(acc, {g.mean[cells[i]], g.variance[cells[i]]});
    }
    out.mean[flat] = acc.mean;
    out.variance[flat] = acc.variance;
  }
  return out;
}

GaussianActivation propagate_layer(const LayerSpec& layer, const GaussianActivation& g) {
  switch (layer.kind) {
    case LayerKind::Relu:
      return propagate_relu(g);
    case LayerKind::MaxPool:
      return propagate_max(layer, g);
    default:
      return propagate_linear(layer, g);
  }
}

GaussianActivation propagate_from(const Model& model, std::size_t start_index,
                                  const GaussianActivation& g) {
  if (start_index > model.layers.size()) throw ShapeError("layer index out of range");
  if (g.mean.shape() != model.activation_shapes[start_index]) {
    throw ShapeError("activation shape " + shape_to_string(g.mean.shape()) +
                     " does not match layer " + std::to_string(start_index) + " input " +
                     shape_to_string(model.activation_shapes[start_index]));
  }
  GaussianActivation act = g;
  for (std::size_t i = start_index; i < model.layers.size(); ++i) {
    act = propagate_layer(model.layers[i], act);
  }
  return act;
}

MomentPair propagate_tail(const Model& model, std::size_t start_index,
                          const GaussianActivation& g, std::size_t class_index,
                          EvalCounter& counter) {
  if (class_index >= model.output_dim) throw ShapeError("class index out of range");
  const GaussianActivation out = propagate_from(model, start_index, g);
  counter.add(2.0);
  return {out.mean[class_index], out.variance[class_index]};
}

TailPair propagate_tail_pair(const Model& model, std::size_t start_index,
                             const GaussianActivation& g_without,
                             const GaussianActivation& g_with, std::size_t class_index,
                             EvalCounter& counter) {
  if (class_index >= model.output_dim) throw ShapeError("class index out of range");
  const GaussianActivation a = propagate_from(model, start_index, g_without);
  const GaussianActivation b = propagate_from(model, start_index, g_with);
  counter.add(2.0);
  return {{a.mean[class_index], a.variance[class_index]},
          {b.mean[class_index], b.variance[class_index]}};
}

}  // namespace shapprop
