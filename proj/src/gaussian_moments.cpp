#include "shapprop/gaussian_moments.hpp"

#include <cassert>
#include <cmath>

namespace shapprop {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

// E[Y^2] - mean^2 cancels catastrophically in the tails; the residue is a
// tiny negative that we clamp. Anything larger indicates a formula bug.
double clamp_variance(double v) {
  if (v < 0.0) {
    assert(v > -1e-9);
    return 0.0;
  }
  return v;
}

}  // namespace

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

double std_normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

MomentPair relu_gaussian_moments(const MomentPair& in) {
  if (in.variance < kPointMassVariance) {
    return {in.mean > 0.0 ? in.mean : 0.0, in.variance < 0.0 ? 0.0 : in.variance};
  }
  const double mu = in.mean;
  const double theta = std::sqrt(in.variance);
  const double r = mu / theta;
  const double cdf = std_normal_cdf(r);
  const double pdf = std_normal_pdf(r);
  double mean = mu * cdf + theta * pdf;
  if (mean < 0.0) mean = 0.0;
  const double second = (mu * mu + in.variance) * cdf + mu * theta * pdf;
  return {mean, clamp_variance(second - mean * mean)};
}

MomentPair max_pair_moments(const MomentPair& a, const MomentPair& b) {
  const double theta_sq = a.variance + b.variance;
  if (theta_sq < kPointMassVariance) {
    return a.mean >= b.mean ? a : b;
  }
  const double theta = std::sqrt(theta_sq);
  const double alpha = (a.mean - b.mean) / theta;
  const double cdf_a = std_normal_cdf(alpha);
  const double cdf_b = std_normal_cdf(-alpha);
  const double pdf = std_normal_pdf(alpha);
  const double mean = a.mean * cdf_a + b.mean * cdf_b + theta * pdf;
  const double second = (a.mean * a.mean + a.variance) * cdf_a +
                        (b.mean * b.mean + b.variance) * cdf_b +
                        (a.mean + b.mean) * theta * pdf;
  return {mean, clamp_variance(second - mean * mean)};
}

}  // namespace shapprop
