#include "duet/train/loss.hpp"

#include <algorithm>
#include <cmath>

#include "duet/error.hpp"

namespace duet::train {
namespace {

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

double ranknet_loss(double delta, double sigma) { return softplus(-sigma * delta); }

double ranknet_gradient(double delta, double sigma) { return -sigma * sigmoid(-sigma * delta); }

double softmax_pair_loss(double positive_score, double negative_score, double sigma) {
  const double a = sigma * positive_score, b = sigma * negative_score;
  const double m = std::max(a, b);
  const double log_z = m + std::log(std::exp(a - m) + std::exp(b - m));
  return log_z - a;
}

template <typename T>
ndgrad::Tensor<T> ranknet_loss(ndgrad::Tape<T>& tape, const ndgrad::Tensor<T>& delta, T sigma) {
  if (!(sigma > T(0))) throw ParameterError("ranknet_loss: sigma must be positive");
  return ndgrad::softplus(tape, ndgrad::scale(tape, delta, -sigma));
}

template ndgrad::Tensor<float> ranknet_loss(ndgrad::Tape<float>&, const ndgrad::Tensor<float>&, float);
template ndgrad::Tensor<double> ranknet_loss(ndgrad::Tape<double>&, const ndgrad::Tensor<double>&, double);

}  // namespace duet::train
