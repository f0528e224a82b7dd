#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "duet/ndgrad/tensor.hpp"

namespace duet::ndgrad {

template <typename T>
struct Parameter {
  std::string name;
  Tensor<T> tensor;
};

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <typename T>
struct AdamSlot {
  std::vector<T> m;
  std::vector<T> v;
};

// Adam with bias correction and no weight decay. Parameters whose tensor
// does not require a gradient are left untouched; a trainable parameter
// with no accumulated gradient is treated as having a zero gradient.
template <typename T>
class Adam {
 public:
  Adam(std::vector<Parameter<T>> params, AdamConfig config = {});

  // Applies one update from the accumulated gradients. If any gradient
  // holds NaN/Inf, throws NumericError naming the parameter and leaves
  // every parameter and moment untouched.
  void step();
  void zero_grad();

  std::int64_t steps() const { return t_; }
  const AdamConfig& config() const { return config_; }
  const std::vector<Parameter<T>>& parameters() const { return params_; }
  const AdamSlot<T>& slot(std::size_t i) const { return slots_.at(i); }

 private:
  std::vector<Parameter<T>> params_;
  std::vector<AdamSlot<T>> slots_;
  AdamConfig config_;
  std::int64_t t_ = 0;
};

extern template class Adam<float>;
extern template class Adam<double>;

}  // namespace duet::ndgrad
