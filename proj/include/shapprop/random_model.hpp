#pragma once

#include <cstdint>
#include <string>

#include "shapprop/model.hpp"

namespace shapprop {

/// Builds a random test model from a compact architecture descriptor.
/// Tokens are dash-separated; the first token is the input shape.
///
///   "18-32-relu-32-relu-1"                      three dense layers, two ReLUs
///   "8x8x1-conv2d:3x3x4-relu-maxpool:2x2-flatten-16-relu-1"
///   "20x4-conv1d:5x8-relu-gap-3"
///
/// Token forms: plain integer (dense to that width), "relu", "flatten",
/// "gap" (global average pool), "conv1d:KWxCOUT", "conv2d:KHxKWxCOUT",
/// "maxpool:W" / "maxpool:HxW", "avgpool:W" / "avgpool:HxW".
///
/// Weights ~ N(0, 2/fan_in), biases ~ N(0, 0.1); deterministic in seed.
/// Throws ShapeError on an illegal descriptor or layer chain.
Model generate_random_model(std::uint64_t seed, const std::string& arch);

}  // namespace shapprop
