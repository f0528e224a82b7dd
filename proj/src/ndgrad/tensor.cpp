#include "duet/ndgrad/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "duet/error.hpp"
#include "duet/ndgrad/tape.hpp"

namespace duet::ndgrad {

std::size_t numel(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

std::string to_string(const Shape& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "×";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

template <typename T>
T* TensorData<T>::grad_buffer() {
  if (grad.empty()) grad.assign(value.size(), T(0));
  return grad.data();
}

template <typename T>
Tensor<T> Tensor<T>::zeros(Shape shape, bool requires_grad) {
  return from(shape, std::vector<T>(numel(shape), T(0)), requires_grad);
}

template <typename T>
Tensor<T> Tensor<T>::from(Shape shape, std::vector<T> values, bool requires_grad) {
  for (auto d : shape)
    if (d == 0) throw DimensionError("tensor dimensions must be positive, got " + to_string(shape));
  if (numel(shape) != values.size())
    throw DimensionError("shape " + to_string(shape) + " needs " +
                         std::to_string(numel(shape)) + " values, got " +
                         std::to_string(values.size()));
  auto node = std::make_shared<TensorData<T>>();
  node->shape = std::move(shape);
  node->value = std::move(values);
  node->requires_grad = requires_grad;
  return wrap(std::move(node));
}

template <typename T>
Tensor<T> Tensor<T>::scalar(T value, bool requires_grad) {
  return from({1}, {value}, requires_grad);
}

template <typename T>
T Tensor<T>::item() const {
  if (size() != 1)
    throw ContractError("item() on tensor of shape " + to_string(shape()));
  return d_->value[0];
}

template <typename T>
void Tensor<T>::zero_grad() {
  std::fill(d_->grad.begin(), d_->grad.end(), T(0));
}

template <typename T>
Tensor<T> Tensor<T>::clone() const {
  auto node = std::make_shared<TensorData<T>>(*d_);
  return wrap(std::move(node));
}

template <typename T>
bool Tensor<T>::all_finite() const {
  return std::all_of(d_->value.begin(), d_->value.end(),
                     [](T v) { return std::isfinite(v); });
}

template <typename T>
void Tape<T>::backward(const Tensor<T>& loss, T seed) {
  if (loss.size() != 1)
    throw ContractError("backward() needs a scalar loss, got shape " +
                        to_string(loss.shape()));
  loss.node()->grad_buffer()[0] += seed;
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) (*it)();
  ops_.clear();
}

template struct TensorData<float>;
template struct TensorData<double>;
template class Tensor<float>;
template class Tensor<double>;
template class Tape<float>;
template class Tape<double>;

}  // namespace duet::ndgrad
