#include "resperf/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace resperf {

std::size_t shape_product(const Tensor::Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>{});
}

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)) {
  if (shape_.size() > 3) throw std::invalid_argument("tensor rank above 3");
  values_.assign(shape_product(shape_), fill);
}

Tensor::Tensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(values.begin(), values.end()) {
  if (shape_.size() > 3) throw std::invalid_argument("tensor rank above 3");
  if (values_.size() != shape_product(shape_)) {
    throw std::invalid_argument("tensor value count does not match shape");
  }
}

Tensor Tensor::reshaped(Shape shape) const& {
  Tensor copy = *this;
  return std::move(copy).reshaped(std::move(shape));
}

Tensor Tensor::reshaped(Shape shape) && {
  if (shape_product(shape) != values_.size()) {
    throw std::invalid_argument("reshape changes element count");
  }
  if (shape.size() > 3) throw std::invalid_argument("tensor rank above 3");
  shape_ = std::move(shape);
  return std::move(*this);
}

void Tensor::fill(double v) { std::fill(values_.begin(), values_.end(), v); }

bool Tensor::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double Tensor::squared_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return s;
}

}  // namespace resperf
