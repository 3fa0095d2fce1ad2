#pragma once

namespace shapprop {

/// First two moments of a scalar distribution, in activation units.
/// variance is kept >= 0; tiny negatives from floating-point cancellation
/// are clamped at the producer side.
struct MomentPair {
  double mean = 0.0;
  double variance = 0.0;
};

/// Variance threshold below which a distribution is treated as a point mass
/// and the analytic limits of the moment formulas are used.
inline constexpr double kPointMassVariance = 1e-12;

/// Standard normal CDF. Absolute error <= 1e-10 on finite inputs,
/// monotone, no underflow issues in the tails.
double std_normal_cdf(double z);

/// Standard normal density.
double std_normal_pdf(double z);

/// Moments of max(0, Z) for Z ~ N(in.mean, in.variance): the rectified
/// Gaussian that a ReLU produces from a Gaussian input.
MomentPair relu_gaussian_moments(const MomentPair& in);

/// Clark moments of max(A, B) for independent Gaussians A, B.
/// Exact for the first two moments of the true maximum; the Gaussian
/// shape is the approximation when the result is filtered onward.
MomentPair max_pair_moments(const MomentPair& a, const MomentPair& b);

}  // namespace shapprop
