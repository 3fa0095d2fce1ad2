#pragma once

#include <cstddef>
#include <vector>

#include "shapprop/model.hpp"
#include "shapprop/tensor.hpp"

namespace shapprop {

/// Variance scaling for the coalition-size compensation.
/// Corrected uses k(M-k)/(M-1) over the M = N-1 features the coalition is
/// actually drawn from, which is exactly zero when all remaining features
/// are present. PaperVerbatim reproduces the k(N-k)/(N-1) factor as printed
/// in the source algorithm, which leaves spurious variance at k = N-1.
enum class CoalitionScaling { Corrected, PaperVerbatim };

/// Gaussian statistics of the first linear layer's pre-activation under a
/// random coalition of fixed size that excludes feature i.
/// mu_with_i - mu equals the fixed contribution column of feature i.
struct CoalitionStats {
  Tensor mu;         // first-layer units, bias included
  Tensor var;        // same shape, >= 0
  Tensor mu_with_i;  // mu plus feature i's contribution
};

/// Per-feature pieces that do not depend on the coalition size k.
/// coalition_input_stats(k) = scale_coalition_stats(base, k, ...), so the
/// per-feature work is done once and reused across the size schedule.
struct CoalitionBase {
  Tensor sum_remaining;  // linear map of (x - baseline) with feature i zeroed
  Tensor mu_unit;        // sum_remaining / M
  Tensor var_unit;       // (1/M) * squared map of the same, minus mu_unit^2
  Tensor offset;         // first-layer bias + linear map of the baseline
  Tensor column_i;       // linear-map column of feature i times (x_i - baseline_i)
  std::size_t remaining;  // M = N - 1
};

/// Computes the k-independent statistics for feature i.
/// The first parametric layer must be linear (dense or conv) and preceded
/// only by flatten layers; otherwise UnsupportedModel.
CoalitionBase coalition_base_stats(const Model& model, const Tensor& x, std::size_t feature,
                                   const Tensor& baseline);

CoalitionStats scale_coalition_stats(const CoalitionBase& base, std::size_t k,
                                     CoalitionScaling scaling);

/// Full per-(feature, size) statistics: the composition of the two calls above.
CoalitionStats coalition_input_stats(const Model& model, const Tensor& x, std::size_t feature,
                                     std::size_t k, const Tensor& baseline,
                                     CoalitionScaling scaling = CoalitionScaling::Corrected);

/// Coalition sizes to test, spread equally apart over [0, N-1].
struct SizeSchedule {
  std::vector<std::size_t> sizes;  // strictly increasing
  std::size_t count() const { return sizes.size(); }
};

/// K = 1 picks the middle size; K >= 2 rounds linspace(0, N-1, K) and keeps
/// both endpoints. Throws InvalidArgument unless 1 <= K <= N.
SizeSchedule pick_coalition_sizes(std::size_t num_features, std::size_t k_count);

/// Index of the first layer after the first parametric layer (the start of
/// the probabilistic tail). Throws UnsupportedModel if the model has no
/// parametric layer or a nonlinear layer precedes it.
std::size_t tail_start_index(const Model& model);

}  // namespace shapprop
