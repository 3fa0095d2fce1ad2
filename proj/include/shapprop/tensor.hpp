#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "shapprop/errors.hpp"

namespace shapprop {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_to_string(const Shape& shape);

/// Dense n-dimensional array of doubles, row-major.
/// The shape is fixed at construction; only the values may change.
class Tensor {
 public:
  Tensor() = default;

  explicit Tensor(Shape shape) : shape_(std::move(shape)), data_(shape_numel(shape_), 0.0) {}

  Tensor(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != shape_numel(shape_)) {
      throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                       " does not match shape " + shape_to_string(shape_));
    }
  }

  /// 1-D convenience constructor.
  Tensor(std::initializer_list<double> values)
      : shape_{values.size()}, data_(values.begin(), values.end()) {}

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t numel() const { return data_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_[axis]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  double operator[](std::size_t flat) const { return data_[flat]; }
  double& operator[](std::size_t flat) { return data_[flat]; }

  /// Row-major flat index of a multi-index.
  std::size_t flat_index(const std::vector<std::size_t>& idx) const {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < shape_.size(); ++a) flat = flat * shape_[a] + idx[a];
    return flat;
  }

  double at(const std::vector<std::size_t>& idx) const { return data_[flat_index(idx)]; }
  double& at(const std::vector<std::size_t>& idx) { return data_[flat_index(idx)]; }

  /// Same data viewed under a new shape with equal element count.
  Tensor reshaped(Shape new_shape) const;

  bool all_finite() const;

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

 private:
  Shape shape_;
  std::vector<double> data_;
};

}  // namespace shapprop
