#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace duet::ndgrad {

using Shape = std::vector<std::size_t>;

std::size_t numel(const Shape& shape);
std::string to_string(const Shape& shape);

// Shared storage behind a Tensor handle. Backward closures hold these
// directly so intermediates stay alive for as long as the tape does.
template <typename T>
struct TensorData {
  Shape shape;
  std::vector<T> value;
  std::vector<T> grad;  // empty until something accumulates into it
  bool requires_grad = false;

  // Zero-filled gradient buffer, allocated on first use.
  T* grad_buffer();
};

// Dense row-major array with an optional gradient accumulator. Copies are
// shallow handles; use clone() for a deep copy.
template <typename T>
class Tensor {
 public:
  using value_type = T;

  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor from(Shape shape, std::vector<T> values, bool requires_grad = false);
  static Tensor scalar(T value, bool requires_grad = false);

  bool defined() const { return static_cast<bool>(d_); }
  const Shape& shape() const { return d_->shape; }
  std::size_t rank() const { return d_->shape.size(); }
  std::size_t size() const { return d_->value.size(); }
  std::size_t dim(std::size_t axis) const { return d_->shape.at(axis); }

  std::span<T> data() { return d_->value; }
  std::span<const T> data() const { return d_->value; }
  T& operator[](std::size_t i) { return d_->value[i]; }
  const T& operator[](std::size_t i) const { return d_->value[i]; }

  // Value of a single-element tensor.
  T item() const;

  bool requires_grad() const { return d_->requires_grad; }
  void set_requires_grad(bool on) { d_->requires_grad = on; }

  bool has_grad() const { return !d_->grad.empty(); }
  // Empty span when no gradient has been accumulated.
  std::span<const T> grad() const { return d_->grad; }
  std::span<T> mutable_grad() { return {d_->grad_buffer(), d_->value.size()}; }
  void zero_grad();

  Tensor clone() const;
  bool same_storage(const Tensor& other) const { return d_ == other.d_; }
  bool all_finite() const;

  const std::shared_ptr<TensorData<T>>& node() const { return d_; }
  static Tensor wrap(std::shared_ptr<TensorData<T>> node) {
    Tensor t;
    t.d_ = std::move(node);
    return t;
  }

 private:
  std::shared_ptr<TensorData<T>> d_;
};

extern template struct TensorData<float>;
extern template struct TensorData<double>;
extern template class Tensor<float>;
extern template class Tensor<double>;

}  // namespace duet::ndgrad
