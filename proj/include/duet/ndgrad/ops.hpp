#pragma once

// Differentiable operations. Each op computes its forward result eagerly
// and, if any input requires a gradient, records a backward rule on the
// tape. Shape errors throw DimensionError naming the offending shapes.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <type_traits>

#include "duet/ndgrad/tape.hpp"
#include "duet/ndgrad/tensor.hpp"

namespace duet::ndgrad {

enum class Padding { same, valid };

// a (m×k) · b (k×n)
template <typename T>
Tensor<T> matmul(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b);

// x (m×n) + bias (n), bias broadcast over rows.
template <typename T>
Tensor<T> add_bias(Tape<T>& tape, const Tensor<T>& x, const Tensor<T>& bias);

// x (m×k) · w (k×n) + b (n)
template <typename T>
Tensor<T> linear(Tape<T>& tape, const Tensor<T>& x, const Tensor<T>& w,
                 const Tensor<T>& b);

template <typename T>
Tensor<T> add(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b);
template <typename T>
Tensor<T> sub(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b);
// Hadamard product.
template <typename T>
Tensor<T> mul(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b);
// x (m×n) ⊙ v (n), v broadcast over rows.
template <typename T>
Tensor<T> mul_rows(Tape<T>& tape, const Tensor<T>& x, const Tensor<T>& v);
template <typename T>
Tensor<T> scale(Tape<T>& tape, const Tensor<T>& x, T factor);
template <typename T>
Tensor<T> sum(Tape<T>& tape, const Tensor<T>& x);
template <typename T>
Tensor<T> mean(Tape<T>& tape, const Tensor<T>& x);
// Concatenates along `axis`; all other dimensions must agree.
template <typename T>
Tensor<T> concat(Tape<T>& tape, std::span<const Tensor<T>> parts, std::size_t axis = 0);
template <typename T>
Tensor<T> reshape(Tape<T>& tape, const Tensor<T>& x, Shape shape);
template <typename T>
Tensor<T> transpose(Tape<T>& tape, const Tensor<T>& x);

// Cross-correlation of input (channels×length) with kernels
// (filters×channels×width), plus an optional per-filter bias. `same`
// zero-pads (width-1)/2 on the left and the remainder on the right.
template <typename T>
Tensor<T> conv1d(Tape<T>& tape, const Tensor<T>& input, const Tensor<T>& kernels,
                 const std::type_identity_t<Tensor<T>>* bias, Padding padding);

// Per-channel windowed max over input (channels×length). Positions at or
// beyond `valid_length` are masked out; a window with no valid position
// yields 0 and passes no gradient. Ties route the gradient to the first
// maximal position.
template <typename T>
Tensor<T> max_pool(Tape<T>& tape, const Tensor<T>& input, std::size_t window,
                   std::size_t stride,
                   std::optional<std::size_t> valid_length = std::nullopt);

template <typename T>
Tensor<T> relu(Tape<T>& tape, const Tensor<T>& x);
template <typename T>
Tensor<T> tanh_act(Tape<T>& tape, const Tensor<T>& x);
// log(1 + e^x), overflow-safe in both directions.
template <typename T>
Tensor<T> softplus(Tape<T>& tape, const Tensor<T>& x);

// Inverted dropout: survivors are scaled by 1/(1-rate) in training mode;
// inference mode and rate 0 return the input unchanged.
template <typename T>
Tensor<T> dropout(Tape<T>& tape, const Tensor<T>& x, double rate, bool training,
                  std::mt19937_64& rng);

// Row lookup into table (V×dim). Gradients scatter-add into the table.
// Positions holding `padding_id` read as zeros whatever the table row holds,
// and that row receives no gradient.
template <typename T>
Tensor<T> embedding_gather(Tape<T>& tape, const Tensor<T>& table,
                           std::span<const std::int32_t> ids,
                           std::optional<std::int32_t> padding_id = std::nullopt);

}  // namespace duet::ndgrad
