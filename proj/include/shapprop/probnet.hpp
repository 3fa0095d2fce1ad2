#pragma once

#include "shapprop/eval_counter.hpp"
#include "shapprop/gaussian_moments.hpp"
#include "shapprop/model.hpp"
#include "shapprop/tensor.hpp"

namespace shapprop {

/// Diagonal Gaussian over a layer activation: one independent univariate
/// Gaussian per unit. mean and variance always share a shape and every
/// variance entry is >= 0.
struct GaussianActivation {
  Tensor mean;
  Tensor variance;

  GaussianActivation() = default;
  GaussianActivation(Tensor mean_, Tensor variance_);

  /// Point mass at x (zero variance everywhere).
  static GaussianActivation point_mass(const Tensor& x);
};

/// Filters a Gaussian through a linear layer (dense/conv1d/conv2d/avgpool/
/// globalavgpool/flatten): mean gets the full layer with bias, variance the
/// squared-coefficient map. Exact first/second moments for any linear map.
GaussianActivation propagate_linear(const LayerSpec& layer, const GaussianActivation& g);

/// Elementwise rectified-Gaussian moments.
GaussianActivation propagate_relu(const GaussianActivation& g);

/// Moment-matched max pooling. Each window is reduced pairwise left to
/// right in row-major flat order; Clark's approximation is not associative,
/// so the fixed order keeps results reproducible.
GaussianActivation propagate_max(const LayerSpec& layer, const GaussianActivation& g);

/// One layer of either kind.
GaussianActivation propagate_layer(const LayerSpec& layer, const GaussianActivation& g);

/// Filters g through layers [start_index, end). No budget accounting.
GaussianActivation propagate_from(const Model& model, std::size_t start_index,
                                  const GaussianActivation& g);

/// Filters g through the tail of the network starting at layer
/// `start_index` and returns output unit `class_index`'s moments.
/// Counts 2 forward-equivalents (mean + variance propagation).
MomentPair propagate_tail(const Model& model, std::size_t start_index,
                          const GaussianActivation& g, std::size_t class_index,
                          EvalCounter& counter);

/// Propagates a with/without-feature pair of distributions that share one
/// variance tensor, as used by one DASP (feature, coalition size) cell.
/// The pair counts as a single doubled evaluation: 2 forward-equivalents
/// total, matching the published cost model of 2KN evaluations.
struct TailPair {
  MomentPair without_feature;
  MomentPair with_feature;
};
TailPair propagate_tail_pair(const Model& model, std::size_t start_index,
                             const GaussianActivation& g_without,
                             const GaussianActivation& g_with, std::size_t class_index,
                             EvalCounter& counter);

}  // namespace shapprop
