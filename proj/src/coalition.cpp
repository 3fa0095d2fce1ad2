#include "shapprop/coalition.hpp"

#include <cmath>
#include <string>

#include "shapprop/engine.hpp"
#include "shapprop/errors.hpp"

namespace shapprop {

namespace {

// Applies the model's leading linear segment (flatten prefix + first
// parametric layer) without bias. With squared coefficients this is the
// variance map of the same segment; flatten does not mix coefficients, so
// squaring commutes with the prefix.
Tensor first_linear_map(const Model& model, std::size_t first, const Tensor& v, bool squared) {
  Tensor t = v;
  for (std::size_t j = 0; j < first; ++j) {
    t = detail::apply_linear_map(model.layers[j], t, squared);
  }
  return detail::apply_linear_map(model.layers[first], t, squared);
}

}  // namespace

std::size_t tail_start_index(const Model& model) {
  if (model.first_parametric < 0) {
    throw UnsupportedModel("model has no parametric layer; the coalition decomposition needs a "
                           "leading dense or conv layer");
  }
  const std::size_t first = static_cast<std::size_t>(model.first_parametric);
  for (std::size_t j = 0; j < first; ++j) {
    if (model.layers[j].kind != LayerKind::Flatten) {
      throw UnsupportedModel(std::string("layer ") + std::to_string(j) + " (" +
                             layer_kind_name(model.layers[j].kind) +
                             ") precedes the first linear layer; only flatten is supported there");
    }
  }
  return first + 1;
}

CoalitionBase coalition_base_stats(const Model& model, const Tensor& x, std::size_t feature,
                                   const Tensor& baseline) {
  const std::size_t n = model.num_features();
  if (x.shape() != model.input_shape) {
    throw ShapeError("input shape does not match model input");
  }
  if (!baseline.same_shape(x)) throw ShapeError("baseline shape does not match input");
  if (feature >= n) throw ShapeError("feature index out of range");
  if (n < 2) throw ShapeError("coalition statistics need at least 2 features");
  const std::size_t first = tail_start_index(model) - 1;
  const LayerSpec& layer = model.layers[first];

  CoalitionBase base;
  base.remaining = n - 1;
  const double m = static_cast<double>(base.remaining);

  // contributions d_j = x_j - baseline_j, with feature i toggled off
  Tensor d(x.shape());
  Tensor d_sq(x.shape());
  for (std::size_t j = 0; j < n; ++j) {
    const double v = j == feature ? 0.0 : x[j] - baseline[j];
    d[j] = v;
    d_sq[j] = v * v;
  }

  Tensor lin_d = first_linear_map(model, first, d, false);
  Tensor sq_d2 = first_linear_map(model, first, d_sq, true);

  base.mu_unit = Tensor(lin_d.shape());
  base.var_unit = Tensor(lin_d.shape());
  for (std::size_t u = 0; u < lin_d.numel(); ++u) {
    base.mu_unit[u] = lin_d[u] / m;
    const double var = sq_d2[u] / m - base.mu_unit[u] * base.mu_unit[u];
    base.var_unit[u] = var > 0.0 ? var : 0.0;
  }

  base.offset = first_linear_map(model, first, baseline, false);
  detail::add_bias(layer, base.offset);

  Tensor unit(x.shape());
  unit[feature] = x[feature] - baseline[feature];
  base.column_i = first_linear_map(model, first, unit, false);
  return base;
}

CoalitionStats scale_coalition_stats(const CoalitionBase& base, std::size_t k,
                                     CoalitionScaling scaling) {
  const std::size_t m_int = base.remaining;
  if (k > m_int) {
    throw ShapeError("coalition size " + std::to_string(k) + " exceeds the " +
                     std::to_string(m_int) + " remaining features");
  }
  const double m = static_cast<double>(m_int);
  const double kd = static_cast<double>(k);

  double factor = 0.0;
  if (scaling == CoalitionScaling::Corrected) {
    // sampling k of M without replacement: k (M-k)/(M-1), zero at both ends
    factor = m_int > 1 ? kd * (m - kd) / (m - 1.0) : 0.0;
  } else {
    // factor as printed in the source algorithm, population of N = M+1
    factor = kd * (m + 1.0 - kd) / m;
  }

  CoalitionStats stats;
  stats.mu = Tensor(base.mu_unit.shape());
  stats.var = Tensor(base.mu_unit.shape());
  stats.mu_with_i = Tensor(base.mu_unit.shape());
  const bool full = k == m_int;
  for (std::size_t u = 0; u < stats.mu.numel(); ++u) {
    // k = M reconstructs the full remaining sum exactly, without the /M round trip
    const double scaled = full ? base.mu_unit[u] * m : kd * base.mu_unit[u];
    const double mu = (k == 0 ? 0.0 : scaled) + base.offset[u];
    stats.mu[u] = mu;
    stats.var[u] = factor * base.var_unit[u];
    stats.mu_with_i[u] = mu + base.column_i[u];
  }
  return stats;
}

CoalitionStats coalition_input_stats(const Model& model, const Tensor& x, std::size_t feature,
                                     std::size_t k, const Tensor& baseline,
                                     CoalitionScaling scaling) {
  return scale_coalition_stats(coalition_base_stats(model, x, feature, baseline), k, scaling);
}

SizeSchedule pick_coalition_sizes(std::size_t num_features, std::size_t k_count) {
  if (k_count < 1 || k_count > num_features) {
    throw InvalidArgument("coalition size count must be in [1, N], got " +
                          std::to_string(k_count) + " for N = " + std::to_string(num_features));
  }
  SizeSchedule schedule;
  if (k_count == 1) {
    schedule.sizes.push_back((num_features - 1) / 2);
    return schedule;
  }
  const double top = static_cast<double>(num_features - 1);
  for (std::size_t t = 0; t < k_count; ++t) {
    const double v = top * static_cast<double>(t) / static_cast<double>(k_count - 1);
    const std::size_t s = static_cast<std::size_t>(std::llround(v));
    if (schedule.sizes.empty() || schedule.sizes.back() != s) schedule.sizes.push_back(s);
  }
  return schedule;
}

}  // namespace shapprop
