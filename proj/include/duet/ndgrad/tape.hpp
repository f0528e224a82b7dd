#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "duet/ndgrad/tensor.hpp"

namespace duet::ndgrad {

// Ordered record of executed differentiable ops. Ops append their backward
// rule as they run, so inputs always precede the ops that consume them and
// a reverse walk is a valid topological order.
template <typename T>
class Tape {
 public:
  using Backward = std::function<void()>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;
  Tape(Tape&&) = default;
  Tape& operator=(Tape&&) = default;

  void record(Backward rule) { ops_.push_back(std::move(rule)); }
  std::size_t size() const { return ops_.size(); }

  // Seeds d(loss)/d(loss) = seed and runs every recorded rule once in
  // reverse order. The tape is empty afterwards. Throws ContractError for
  // a non-scalar loss.
  void backward(const Tensor<T>& loss, T seed = T(1));

  // With gradients disabled ops only compute values and record nothing
  // (inference mode).
  void set_grad_enabled(bool on) { grad_enabled_ = on; }
  bool grad_enabled() const { return grad_enabled_; }

  // When enabled, every forward op output is checked for NaN/Inf.
  void set_check_finite(bool on) { check_finite_ = on; }
  bool check_finite() const { return check_finite_; }

  // Distance to the nearest non-differentiable point seen during the
  // forward pass (ReLU at 0, max-pool ties). Only tracked when enabled.
  void set_track_kinks(bool on) { track_kinks_ = on; }
  bool track_kinks() const { return track_kinks_; }
  void note_kink(T distance) {
    if (distance < min_kink_) min_kink_ = distance;
  }
  T min_kink_distance() const { return min_kink_; }

  void clear() { ops_.clear(); }

 private:
  std::vector<Backward> ops_;
  bool grad_enabled_ = true;
  bool check_finite_ = false;
  bool track_kinks_ = false;
  T min_kink_ = std::numeric_limits<T>::infinity();
};

extern template class Tape<float>;
extern template class Tape<double>;

}  // namespace duet::ndgrad
