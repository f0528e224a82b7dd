#pragma once

#include "duet/ndgrad/ops.hpp"

namespace duet::train {

inline constexpr double kDefaultSigma = 0.1;

// log(1 + exp(-sigma * delta)), stable for any finite delta.
double ranknet_loss(double delta, double sigma = kDefaultSigma);
// d/d(delta) of ranknet_loss: -sigma * sigmoid(-sigma * delta).
double ranknet_gradient(double delta, double sigma = kDefaultSigma);
// Cross-entropy of a two-way softmax over sigma-scaled scores with the
// positive as target.
double softmax_pair_loss(double positive_score, double negative_score, double sigma = kDefaultSigma);

// Tape version over a 1×1 score difference.
template <typename T>
ndgrad::Tensor<T> ranknet_loss(ndgrad::Tape<T>& tape, const ndgrad::Tensor<T>& delta, T sigma);

}  // namespace duet::train
