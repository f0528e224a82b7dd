#pragma once

// Random gradient-check instances for every differentiable ndgrad op.
// Each instance draws inputs in [-2, 2] and reduces the op output with a
// fixed random weighting so that every output coordinate matters.

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "duet/ndgrad/gradcheck.hpp"
#include "duet/ndgrad/ops.hpp"
#include "oracles.hpp"

namespace duet::testing {

using ndgrad::Parameter;
using ndgrad::Shape;
using ndgrad::Tape;
using ndgrad::Tensor;

struct OpInstance {
  std::vector<Parameter<double>> params;
  ndgrad::LossBuilder loss;
};

struct OpCase {
  std::string name;
  std::function<OpInstance(std::mt19937_64&)> make;
};

inline Tensor<double> random_tensor(std::mt19937_64& rng, Shape shape) {
  return Tensor<double>::from(shape, random_values(rng, ndgrad::numel(shape)), true);
}

// loss = sum(y ⊙ w) for a random weighting w fixed per instance.
inline Tensor<double> weighted_sum(Tape<double>& tape, const Tensor<double>& y,
                                   const std::vector<double>& w) {
  auto wt = Tensor<double>::from(y.shape(), w);
  return ndgrad::sum(tape, ndgrad::mul(tape, y, wt));
}

inline std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

template <typename Forward>
OpInstance make_instance(std::mt19937_64& rng, std::vector<Parameter<double>> params,
                         Shape out_shape, Forward forward) {
  auto w = random_values(rng, ndgrad::numel(out_shape), -1.0, 1.0);
  return {std::move(params), [forward, w](Tape<double>& tape) {
            return weighted_sum(tape, forward(tape), w);
          }};
}

inline std::vector<OpCase> differentiable_ops() {
  namespace nd = ndgrad;
  std::vector<OpCase> cases;

  cases.push_back({"matmul", [](std::mt19937_64& rng) {
    const auto m = pick(rng, 1, 4), k = pick(rng, 1, 5), n = pick(rng, 1, 4);
    auto a = random_tensor(rng, {m, k}), b = random_tensor(rng, {k, n});
    return make_instance(rng, {{"a", a}, {"b", b}}, {m, n},
                         [a, b](Tape<double>& t) { return nd::matmul(t, a, b); });
  }});
  cases.push_back({"linear", [](std::mt19937_64& rng) {
    const auto m = pick(rng, 1, 3), k = pick(rng, 1, 5), n = pick(rng, 1, 4);
    auto x = random_tensor(rng, {m, k}), w = random_tensor(rng, {k, n}), b = random_tensor(rng, {n});
    return make_instance(rng, {{"x", x}, {"w", w}, {"b", b}}, {m, n},
                         [x, w, b](Tape<double>& t) { return nd::linear(t, x, w, b); });
  }});
  cases.push_back({"add", [](std::mt19937_64& rng) {
    const Shape s{pick(rng, 1, 3), pick(rng, 1, 4)};
    auto a = random_tensor(rng, s), b = random_tensor(rng, s);
    return make_instance(rng, {{"a", a}, {"b", b}}, s,
                         [a, b](Tape<double>& t) { return nd::add(t, a, b); });
  }});
  cases.push_back({"sub", [](std::mt19937_64& rng) {
    const Shape s{pick(rng, 1, 7)};
    auto a = random_tensor(rng, s), b = random_tensor(rng, s);
    return make_instance(rng, {{"a", a}, {"b", b}}, s,
                         [a, b](Tape<double>& t) { return nd::sub(t, a, b); });
  }});
  cases.push_back({"mul", [](std::mt19937_64& rng) {
    const Shape s{pick(rng, 1, 3), pick(rng, 1, 4)};
    auto a = random_tensor(rng, s), b = random_tensor(rng, s);
    return make_instance(rng, {{"a", a}, {"b", b}}, s,
                         [a, b](Tape<double>& t) { return nd::mul(t, a, b); });
  }});
  cases.push_back({"mul_rows", [](std::mt19937_64& rng) {
    const auto m = pick(rng, 1, 4), n = pick(rng, 1, 5);
    auto x = random_tensor(rng, {m, n}), v = random_tensor(rng, {n});
    return make_instance(rng, {{"x", x}, {"v", v}}, {m, n},
                         [x, v](Tape<double>& t) { return nd::mul_rows(t, x, v); });
  }});
  cases.push_back({"scale", [](std::mt19937_64& rng) {
    const Shape s{pick(rng, 1, 6)};
    auto x = random_tensor(rng, s);
    const double c = random_values(rng, 1)[0];
    return make_instance(rng, {{"x", x}}, s,
                         [x, c](Tape<double>& t) { return nd::scale(t, x, c); });
  }});
  cases.push_back({"sum", [](std::mt19937_64& rng) {
    auto x = random_tensor(rng, {pick(rng, 1, 3), pick(rng, 1, 3)});
    return make_instance(rng, {{"x", x}}, {1}, [x](Tape<double>& t) { return nd::sum(t, x); });
  }});
  cases.push_back({"mean", [](std::mt19937_64& rng) {
    auto x = random_tensor(rng, {pick(rng, 1, 8)});
    return make_instance(rng, {{"x", x}}, {1}, [x](Tape<double>& t) { return nd::mean(t, x); });
  }});
  cases.push_back({"concat", [](std::mt19937_64& rng) {
    const auto rows = pick(rng, 1, 3), c1 = pick(rng, 1, 3), c2 = pick(rng, 1, 3);
    const std::size_t axis = pick(rng, 0, 1);
    Shape sa{rows, c1}, sb{rows, c2};
    if (axis == 0) sa = {c1, rows}, sb = {c2, rows};
    auto a = random_tensor(rng, sa), b = random_tensor(rng, sb);
    Shape out = axis == 0 ? Shape{c1 + c2, rows} : Shape{rows, c1 + c2};
    return make_instance(rng, {{"a", a}, {"b", b}}, out, [a, b, axis](Tape<double>& t) {
      const Tensor<double> parts[] = {a, b};
      return nd::concat<double>(t, parts, axis);
    });
  }});
  cases.push_back({"reshape", [](std::mt19937_64& rng) {
    const auto m = pick(rng, 1, 3), n = pick(rng, 1, 4);
    auto x = random_tensor(rng, {m, n});
    return make_instance(rng, {{"x", x}}, {n * m},
                         [x, m, n](Tape<double>& t) { return nd::reshape(t, x, {m * n}); });
  }});
  cases.push_back({"transpose", [](std::mt19937_64& rng) {
    const auto m = pick(rng, 1, 4), n = pick(rng, 1, 4);
    auto x = random_tensor(rng, {m, n});
    return make_instance(rng, {{"x", x}}, {n, m},
                         [x](Tape<double>& t) { return nd::transpose(t, x); });
  }});
  cases.push_back({"conv1d", [](std::mt19937_64& rng) {
    const auto c = pick(rng, 1, 3), l = pick(rng, 3, 7), f = pick(rng, 1, 3), w = pick(rng, 1, 3);
    const bool same = pick(rng, 0, 1) == 1;
    auto x = random_tensor(rng, {c, l}), k = random_tensor(rng, {f, c, w}), b = random_tensor(rng, {f});
    const std::size_t out_len = same ? l : l - w + 1;
    return make_instance(rng, {{"x", x}, {"k", k}, {"b", b}}, {f, out_len},
                         [x, k, b, same](Tape<double>& t) {
                           return nd::conv1d(t, x, k, &b, same ? nd::Padding::same : nd::Padding::valid);
                         });
  }});
  cases.push_back({"max_pool", [](std::mt19937_64& rng) {
    const auto c = pick(rng, 1, 3), l = pick(rng, 2, 9);
    const auto window = pick(rng, 1, l), stride = pick(rng, 1, 3);
    const auto valid = pick(rng, 1, l);
    auto x = random_tensor(rng, {c, l});
    const std::size_t out_len = (l - window) / stride + 1;
    return make_instance(rng, {{"x", x}}, {c, out_len},
                         [x, window, stride, valid](Tape<double>& t) {
                           return nd::max_pool(t, x, window, stride, valid);
                         });
  }});
  cases.push_back({"relu", [](std::mt19937_64& rng) {
    const Shape s{pick(rng, 1, 8)};
    auto x = random_tensor(rng, s);
    return make_instance(rng, {{"x", x}}, s, [x](Tape<double>& t) { return nd::relu(t, x); });
  }});
  cases.push_back({"tanh", [](std::mt19937_64& rng) {
    const Shape s{pick(rng, 1, 8)};
    auto x = random_tensor(rng, s);
    return make_instance(rng, {{"x", x}}, s, [x](Tape<double>& t) { return nd::tanh_act(t, x); });
  }});
  cases.push_back({"softplus", [](std::mt19937_64& rng) {
    const Shape s{pick(rng, 1, 8)};
    auto x = random_tensor(rng, s);
    return make_instance(rng, {{"x", x}}, s, [x](Tape<double>& t) { return nd::softplus(t, x); });
  }});
  cases.push_back({"dropout", [](std::mt19937_64& rng) {
    const Shape s{pick(rng, 1, 10)};
    auto x = random_tensor(rng, s);
    const std::uint64_t seed = rng();
    return make_instance(rng, {{"x", x}}, s, [x, seed](Tape<double>& t) {
      std::mt19937_64 mask_rng(seed);  // same mask on every evaluation
      return nd::dropout(t, x, 0.5, true, mask_rng);
    });
  }});
  cases.push_back({"embedding_gather", [](std::mt19937_64& rng) {
    const auto v = pick(rng, 2, 6), d = pick(rng, 1, 4), n = pick(rng, 1, 6);
    auto table = random_tensor(rng, {v, d});
    std::vector<std::int32_t> ids(n);
    for (auto& id : ids) id = static_cast<std::int32_t>(pick(rng, 0, v - 1));
    return make_instance(rng, {{"table", table}}, {n, d}, [table, ids](Tape<double>& t) {
      return nd::embedding_gather<double>(t, table, ids, std::nullopt);
    });
  }});
  return cases;
}

// Runs a gradient check on a fresh random instance, resampling points that
// land within the kink margin.
inline ndgrad::GradCheckReport check_random_instance(const OpCase& op, std::mt19937_64& rng,
                                                     double tolerance) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto inst = op.make(rng);
    auto report = ndgrad::gradient_check(inst.params, inst.loss, tolerance);
    if (!report.near_kink) return report;
  }
  ndgrad::GradCheckReport failed;
  failed.worst_parameter = "no kink-free point found";
  return failed;
}

}  // namespace duet::testing
