#include "duet/ndgrad/adam.hpp"

#include <algorithm>
#include <cmath>

#include "duet/error.hpp"

namespace duet::ndgrad {

template <typename T>
Adam<T>::Adam(std::vector<Parameter<T>> params, AdamConfig config)
    : params_(std::move(params)), config_(config) {
  if (!(config_.lr > 0) || !(config_.eps > 0) || config_.beta1 < 0 || config_.beta1 >= 1 ||
      config_.beta2 < 0 || config_.beta2 >= 1)
    throw ParameterError("adam: invalid hyperparameters");
  slots_.reserve(params_.size());
  for (const auto& p : params_)
    slots_.push_back({std::vector<T>(p.tensor.size(), T(0)), std::vector<T>(p.tensor.size(), T(0))});
}

template <typename T>
void Adam<T>::step() {
  for (const auto& p : params_) {
    if (!p.tensor.requires_grad() || !p.tensor.has_grad()) continue;
    for (T g : p.tensor.grad())
      if (!std::isfinite(g))
        throw NumericError("adam: non-finite gradient in parameter '" + p.name + "' at step " +
                           std::to_string(t_ + 1));
  }
  ++t_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  const T b1 = static_cast<T>(config_.beta1), b2 = static_cast<T>(config_.beta2);
  const T step_size = static_cast<T>(config_.lr / c1);
  const T inv_sqrt_c2 = static_cast<T>(1.0 / std::sqrt(c2));
  const T eps = static_cast<T>(config_.eps);

  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto& tensor = params_[i].tensor;
    if (!tensor.requires_grad()) continue;
    auto& slot = slots_[i];
    auto value = tensor.data();
    auto grad = tensor.grad();
    const bool has_grad = !grad.empty();
    for (std::size_t j = 0; j < value.size(); ++j) {
      const T g = has_grad ? grad[j] : T(0);
      slot.m[j] = b1 * slot.m[j] + (T(1) - b1) * g;
      slot.v[j] = b2 * slot.v[j] + (T(1) - b2) * g * g;
      value[j] -= step_size * slot.m[j] / (std::sqrt(slot.v[j]) * inv_sqrt_c2 + eps);
    }
  }
}

template <typename T>
void Adam<T>::zero_grad() {
  for (auto& p : params_) p.tensor.zero_grad();
}

template class Adam<float>;
template class Adam<double>;

}  // namespace duet::ndgrad
