#include "duet/ndgrad/ops.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>

#include "duet/error.hpp"
#include "duet/ndgrad/kernels.hpp"

namespace duet::ndgrad {
namespace {

template <typename T>
using NodePtr = std::shared_ptr<TensorData<T>>;

template <typename T>
bool any_requires_grad(std::initializer_list<const Tensor<T>*> inputs) {
  return std::any_of(inputs.begin(), inputs.end(),
                     [](const Tensor<T>* t) { return t && t->requires_grad(); });
}

template <typename T>
Tensor<T> finish(Tape<T>& tape, Shape shape, std::vector<T> values, bool requires_grad,
                 const char* op) {
  auto out = Tensor<T>::from(std::move(shape), std::move(values), requires_grad);
  if (tape.check_finite() && !out.all_finite())
    throw NumericError(std::string(op) + " produced a non-finite value");
  return out;
}

template <typename T>
void require_rank(const Tensor<T>& t, std::size_t rank, const char* op, const char* what) {
  if (t.rank() != rank)
    throw DimensionError(std::string(op) + ": " + what + " must have rank " +
                         std::to_string(rank) + ", got " + to_string(t.shape()));
}

template <typename T>
void require_same_shape(const Tensor<T>& a, const Tensor<T>& b, const char* op) {
  if (a.shape() != b.shape())
    throw DimensionError(std::string(op) + ": shape mismatch " + to_string(a.shape()) +
                         " vs " + to_string(b.shape()));
}

template <typename T>
void accumulate(const NodePtr<T>& into, const T* g, std::size_t n) {
  if (!into->requires_grad) return;
  simd::kernels<T>().axpy(T(1), g, into->grad_buffer(), n);
}

}  // namespace

template <typename T>
Tensor<T> matmul(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b) {
  require_rank(a, 2, "matmul", "left operand");
  require_rank(b, 2, "matmul", "right operand");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k)
    throw DimensionError("matmul: inner dimensions disagree, " + to_string(a.shape()) +
                         " × " + to_string(b.shape()));
  std::vector<T> out(m * n, T(0));
  simd::gemm<T>(m, k, n, a.data().data(), b.data().data(), out.data());
  const bool rg = tape.grad_enabled() && any_requires_grad<T>({&a, &b});
  auto y = finish(tape, {m, n}, std::move(out), rg, "matmul");
  if (rg) {
    tape.record([an = a.node(), bn = b.node(), yn = y.node(), m, k, n] {
      if (yn->grad.empty()) return;
      const T* g = yn->grad.data();
      if (an->requires_grad)
        simd::gemm_bt<T>(m, n, k, g, bn->value.data(), an->grad_buffer());
      if (bn->requires_grad)
        simd::gemm_at<T>(k, m, n, an->value.data(), g, bn->grad_buffer());
    });
  }
  return y;
}

template <typename T>
Tensor<T> add_bias(Tape<T>& tape, const Tensor<T>& x, const Tensor<T>& bias) {
  require_rank(x, 2, "add_bias", "input");
  const std::size_t m = x.dim(0), n = x.dim(1);
  if (bias.size() != n)
    throw DimensionError("add_bias: bias " + to_string(bias.shape()) +
                         " does not match input " + to_string(x.shape()));
  const auto& kt = simd::kernels<T>();
  std::vector<T> out(m * n);
  for (std::size_t i = 0; i < m; ++i)
    kt.add(x.data().data() + i * n, bias.data().data(), out.data() + i * n, n);
  const bool rg = tape.grad_enabled() && any_requires_grad<T>({&x, &bias});
  auto y = finish(tape, x.shape(), std::move(out), rg, "add_bias");
  if (rg) {
    tape.record([xn = x.node(), bn = bias.node(), yn = y.node(), m, n] {
      if (yn->grad.empty()) return;
      const T* g = yn->grad.data();
      accumulate(xn, g, m * n);
      if (bn->requires_grad) {
        T* gb = bn->grad_buffer();
        const auto& kt = simd::kernels<T>();
        for (std::size_t i = 0; i < m; ++i) kt.axpy(T(1), g + i * n, gb, n);
      }
    });
  }
  return y;
}

template <typename T>
Tensor<T> linear(Tape<T>& tape, const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b) {
  return add_bias(tape, matmul(tape, x, w), b);
}

template <typename T>
Tensor<T> add(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape(a, b, "add");
  std::vector<T> out(a.size());
  simd::kernels<T>().add(a.data().data(), b.data().data(), out.data(), out.size());
  const bool rg = tape.grad_enabled() && any_requires_grad<T>({&a, &b});
  auto y = finish(tape, a.shape(), std::move(out), rg, "add");
  if (rg) {
    tape.record([an = a.node(), bn = b.node(), yn = y.node()] {
      if (yn->grad.empty()) return;
      accumulate(an, yn->grad.data(), yn->grad.size());
      accumulate(bn, yn->grad.data(), yn->grad.size());
    });
  }
  return y;
}

template <typename T>
Tensor<T> sub(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape(a, b, "sub");
  std::vector<T> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  const bool rg = tape.grad_enabled() && any_requires_grad<T>({&a, &b});
  auto y = finish(tape, a.shape(), std::move(out), rg, "sub");
  if (rg) {
    tape.record([an = a.node(), bn = b.node(), yn = y.node()] {
      if (yn->grad.empty()) return;
      accumulate(an, yn->grad.data(), yn->grad.size());
      if (bn->requires_grad)
        simd::kernels<T>().axpy(T(-1), yn->grad.data(), bn->grad_buffer(), yn->grad.size());
    });
  }
  return y;
}

template <typename T>
Tensor<T> mul(Tape<T>& tape, const Tensor<T>& a, const Tensor<T>& b) {
  require_same_shape(a, b, "mul");
  std::vector<T> out(a.size());
  simd::kernels<T>().mul(a.data().data(), b.data().data(), out.data(), out.size());
  const bool rg = tape.grad_enabled() && any_requires_grad<T>({&a, &b});
  auto y = finish(tape, a.shape(), std::move(out), rg, "mul");
  if (rg) {
    tape.record([an = a.node(), bn = b.node(), yn = y.node()] {
      if (yn->grad.empty()) return;
      const auto& kt = simd::kernels<T>();
      const std::size_t n = yn->grad.size();
      if (an->requires_grad) kt.mul_acc(yn->grad.data(), bn->value.data(), an->grad_buffer(), n);
      if (bn->requires_grad) kt.mul_acc(yn->grad.data(), an->value.data(), bn->grad_buffer(), n);
    });
  }
  return y;
}

template <typename T>
Tensor<T> mul_rows(Tape<T>& tape, const Tensor<T>& x, const Tensor<T>& v) {
  require_rank(x, 2, "mul_rows", "input");
  const std::size_t m = x.dim(0), n = x.dim(1);
  if (v.size() != n)
    throw DimensionError("mul_rows: vector " + to_string(v.shape()) +
                         " does not match input " + to_string(x.shape()));
  const auto& kt = simd::kernels<T>();
  std::vector<T> out(m * n);
  for (std::size_t i = 0; i < m; ++i)
    kt.mul(x.data().data() + i * n, v.data().data(), out.data() + i * n, n);
  const bool rg = tape.grad_enabled() && any_requires_grad<T>({&x, &v});
  auto y = finish(tape, x.shape(), std::move(out), rg, "mul_rows");
  if (rg) {
    tape.record([xn = x.node(), vn = v.node(), yn = y.node(), m, n] {
      if (yn->grad.empty()) return;
      const auto& kt = simd::kernels<T>();
      const T* g = yn->grad.data();
      if (xn->requires_grad) {
        T* gx = xn->grad_buffer();
        for (std::size_t i = 0; i < m; ++i) kt.mul_acc(g + i * n, vn->value.data(), gx + i * n, n);
      }
      if (vn->requires_grad) {
        T* gv = vn->grad_buffer();
        for (std::size_t i = 0; i < m; ++i) kt.mul_acc(g + i * n, xn->value.data() + i * n, gv, n);
      }
    });
  }
  return y;
}

template <typename T>
Tensor<T> scale(Tape<T>& tape, const Tensor<T>& x, T factor) {
  std::vector<T> out(x.size());
  simd::kernels<T>().scale(factor, x.data().data(), out.data(), out.size());
  const bool rg = tape.grad_enabled() && x.requires_grad();
  auto y = finish(tape, x.shape(), std::move(out), rg, "scale");
  if (rg) {
    tape.record([xn = x.node(), yn = y.node(), factor] {
      if (yn->grad.empty()) return;
      simd::kernels<T>().axpy(factor, yn->grad.data(), xn->grad_buffer(), yn->grad.size());
    });
  }
  return y;
}

template <typename T>
Tensor<T> sum(Tape<T>& tape, const Tensor<T>& x) {
  T acc = 0;
  for (T v : x.data()) acc += v;
  const bool rg = tape.grad_enabled() && x.requires_grad();
  auto y = finish(tape, {1}, {acc}, rg, "sum");
  if (rg) {
    tape.record([xn = x.node(), yn = y.node()] {
      if (yn->grad.empty()) return;
      const T g = yn->grad[0];
      T* gx = xn->grad_buffer();
      for (std::size_t i = 0; i < xn->value.size(); ++i) gx[i] += g;
    });
  }
  return y;
}

template <typename T>
Tensor<T> mean(Tape<T>& tape, const Tensor<T>& x) {
  return scale(tape, sum(tape, x), T(1) / static_cast<T>(x.size()));
}

template <typename T>
Tensor<T> concat(Tape<T>& tape, std::span<const Tensor<T>> parts, std::size_t axis) {
  if (parts.empty()) throw DimensionError("concat: no inputs");
  const Shape& first = parts[0].shape();
  if (axis >= first.size())
    throw DimensionError("concat: axis " + std::to_string(axis) + " out of range for " +
                         to_string(first));
  Shape out_shape = first;
  out_shape[axis] = 0;
  for (const auto& p : parts) {
    const Shape& s = p.shape();
    bool ok = s.size() == first.size();
    for (std::size_t d = 0; ok && d < s.size(); ++d)
      if (d != axis && s[d] != first[d]) ok = false;
    if (!ok)
      throw DimensionError("concat: shape mismatch " + to_string(first) + " vs " +
                           to_string(s) + " along axis " + std::to_string(axis));
    out_shape[axis] += s[axis];
  }
  std::size_t outer = 1, inner = 1;
  for (std::size_t d = 0; d < axis; ++d) outer *= first[d];
  for (std::size_t d = axis + 1; d < first.size(); ++d) inner *= first[d];

  std::vector<T> out;
  out.reserve(numel(out_shape));
  for (std::size_t o = 0; o < outer; ++o)
    for (const auto& p : parts) {
      const std::size_t chunk = p.shape()[axis] * inner;
      auto src = p.data().subspan(o * chunk, chunk);
      out.insert(out.end(), src.begin(), src.end());
    }

  bool rg = false;
  std::vector<NodePtr<T>> nodes;
  for (const auto& p : parts) {
    rg = rg || p.requires_grad();
    nodes.push_back(p.node());
  }
  rg = rg && tape.grad_enabled();
  auto y = finish(tape, out_shape, std::move(out), rg, "concat");
  if (rg) {
    tape.record([nodes = std::move(nodes), yn = y.node(), outer, inner, axis] {
      if (yn->grad.empty()) return;
      const T* g = yn->grad.data();
      std::size_t offset = 0;
      for (std::size_t o = 0; o < outer; ++o)
        for (const auto& n : nodes) {
          const std::size_t chunk = n->shape[axis] * inner;
          if (n->requires_grad) {
            T* gx = n->grad_buffer() + o * chunk;
            for (std::size_t i = 0; i < chunk; ++i) gx[i] += g[offset + i];
          }
          offset += chunk;
        }
    });
  }
  return y;
}

template <typename T>
Tensor<T> reshape(Tape<T>& tape, const Tensor<T>& x, Shape shape) {
  if (numel(shape) != x.size())
    throw DimensionError("reshape: cannot view " + to_string(x.shape()) + " as " +
                         to_string(shape));
  std::vector<T> out(x.data().begin(), x.data().end());
  const bool rg = tape.grad_enabled() && x.requires_grad();
  auto y = finish(tape, std::move(shape), std::move(out), rg, "reshape");
  if (rg) {
    tape.record([xn = x.node(), yn = y.node()] {
      if (yn->grad.empty()) return;
      accumulate(xn, yn->grad.data(), yn->grad.size());
    });
  }
  return y;
}

template <typename T>
Tensor<T> transpose(Tape<T>& tape, const Tensor<T>& x) {
  require_rank(x, 2, "transpose", "input");
  const std::size_t m = x.dim(0), n = x.dim(1);
  std::vector<T> out(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[j * m + i] = x[i * n + j];
  const bool rg = tape.grad_enabled() && x.requires_grad();
  auto y = finish(tape, {n, m}, std::move(out), rg, "transpose");
  if (rg) {
    tape.record([xn = x.node(), yn = y.node(), m, n] {
      if (yn->grad.empty()) return;
      T* gx = xn->grad_buffer();
      const T* g = yn->grad.data();
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) gx[i * n + j] += g[j * m + i];
    });
  }
  return y;
}

template <typename T>
Tensor<T> conv1d(Tape<T>& tape, const Tensor<T>& input, const Tensor<T>& kernels,
                 const std::type_identity_t<Tensor<T>>* bias, Padding padding) {
  require_rank(input, 2, "conv1d", "input");
  require_rank(kernels, 3, "conv1d", "kernels");
  const std::size_t channels = input.dim(0), length = input.dim(1);
  const std::size_t filters = kernels.dim(0), width = kernels.dim(2);
  if (kernels.dim(1) != channels)
    throw DimensionError("conv1d: kernels " + to_string(kernels.shape()) +
                         " do not match input channels " + to_string(input.shape()));
  if (bias && bias->size() != filters)
    throw DimensionError("conv1d: bias " + to_string(bias->shape()) + " does not match " +
                         std::to_string(filters) + " filters");
  const std::size_t pad_left = padding == Padding::same ? (width - 1) / 2 : 0;
  const std::size_t pad_right = padding == Padding::same ? width - 1 - pad_left : 0;
  const std::size_t padded = length + pad_left + pad_right;
  if (width > padded)
    throw DimensionError("conv1d: kernel width " + std::to_string(width) +
                         " exceeds padded length " + std::to_string(padded));
  const std::size_t out_len = padded - width + 1;
  const std::size_t patch = channels * width;

  // im2col: cols[(c·width + w)][t] = input[c][t + w - pad_left]
  auto cols = std::make_shared<std::vector<T>>(patch * out_len, T(0));
  const T* x = input.data().data();
  for (std::size_t c = 0; c < channels; ++c)
    for (std::size_t w = 0; w < width; ++w) {
      T* row = cols->data() + (c * width + w) * out_len;
      for (std::size_t t = 0; t < out_len; ++t) {
        const std::size_t src = t + w;
        if (src >= pad_left && src - pad_left < length) row[t] = x[c * length + src - pad_left];
      }
    }

  std::vector<T> out(filters * out_len, T(0));
  if (bias)
    for (std::size_t f = 0; f < filters; ++f)
      std::fill_n(out.begin() + f * out_len, out_len, (*bias)[f]);
  simd::gemm<T>(filters, patch, out_len, kernels.data().data(), cols->data(), out.data());

  const bool rg = tape.grad_enabled() && any_requires_grad<T>({&input, &kernels, bias});
  auto y = finish(tape, {filters, out_len}, std::move(out), rg, "conv1d");
  if (rg) {
    tape.record([xn = input.node(), kn = kernels.node(), bn = bias ? bias->node() : nullptr,
                 yn = y.node(), cols, channels, length, filters, width, pad_left, out_len,
                 patch] {
      if (yn->grad.empty()) return;
      const T* g = yn->grad.data();
      if (kn->requires_grad)
        simd::gemm_bt<T>(filters, out_len, patch, g, cols->data(), kn->grad_buffer());
      if (bn && bn->requires_grad) {
        T* gb = bn->grad_buffer();
        for (std::size_t f = 0; f < filters; ++f)
          for (std::size_t t = 0; t < out_len; ++t) gb[f] += g[f * out_len + t];
      }
      if (xn->requires_grad) {
        std::vector<T> gcols(patch * out_len, T(0));
        simd::gemm_at<T>(patch, filters, out_len, kn->value.data(), g, gcols.data());
        T* gx = xn->grad_buffer();
        for (std::size_t c = 0; c < channels; ++c)
          for (std::size_t w = 0; w < width; ++w) {
            const T* row = gcols.data() + (c * width + w) * out_len;
            for (std::size_t t = 0; t < out_len; ++t) {
              const std::size_t src = t + w;
              if (src >= pad_left && src - pad_left < length)
                gx[c * length + src - pad_left] += row[t];
            }
          }
      }
    });
  }
  return y;
}

template <typename T>
Tensor<T> max_pool(Tape<T>& tape, const Tensor<T>& input, std::size_t window,
                   std::size_t stride, std::optional<std::size_t> valid_length) {
  if (window < 1 || stride < 1)
    throw ParameterError("max_pool: window and stride must be >= 1, got window=" +
                         std::to_string(window) + " stride=" + std::to_string(stride));
  require_rank(input, 2, "max_pool", "input");
  const std::size_t channels = input.dim(0), length = input.dim(1);
  if (window > length)
    throw DimensionError("max_pool: window " + std::to_string(window) +
                         " exceeds length of " + to_string(input.shape()));
  const std::size_t valid = std::min(valid_length.value_or(length), length);
  const std::size_t out_len = (length - window) / stride + 1;
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::vector<T> out(channels * out_len, T(0));
  auto argmax = std::make_shared<std::vector<std::size_t>>(channels * out_len, kNone);
  const T* x = input.data().data();
  for (std::size_t c = 0; c < channels; ++c)
    for (std::size_t o = 0; o < out_len; ++o) {
      const std::size_t begin = o * stride;
      const std::size_t end = std::min(begin + window, valid);
      std::size_t best = kNone;
      T runner_up = -std::numeric_limits<T>::infinity();
      for (std::size_t p = begin; p < end; ++p) {
        const T v = x[c * length + p];
        if (best == kNone || v > x[c * length + best]) {
          if (best != kNone) runner_up = x[c * length + best];
          best = p;
        } else if (v > runner_up) {
          runner_up = v;
        }
      }
      if (best == kNone) continue;
      out[c * out_len + o] = x[c * length + best];
      (*argmax)[c * out_len + o] = c * length + best;
      // Exact ties come from identical or clamped inputs, which move together.
      const T gap = x[c * length + best] - runner_up;
      if (tape.track_kinks() && end - begin > 1 && gap > T(0)) tape.note_kink(gap);
    }

  const bool rg = tape.grad_enabled() && input.requires_grad();
  auto y = finish(tape, {channels, out_len}, std::move(out), rg, "max_pool");
  if (rg) {
    tape.record([xn = input.node(), yn = y.node(), argmax] {
      if (yn->grad.empty()) return;
      T* gx = xn->grad_buffer();
      const T* g = yn->grad.data();
      for (std::size_t i = 0; i < argmax->size(); ++i)
        if ((*argmax)[i] != kNone) gx[(*argmax)[i]] += g[i];
    });
  }
  return y;
}

template <typename T>
Tensor<T> relu(Tape<T>& tape, const Tensor<T>& x) {
  std::vector<T> out(x.size());
  simd::kernels<T>().relu(x.data().data(), out.data(), out.size());
  if (tape.track_kinks())
    for (T v : x.data()) tape.note_kink(std::abs(v));
  const bool rg = tape.grad_enabled() && x.requires_grad();
  auto y = finish(tape, x.shape(), std::move(out), rg, "relu");
  if (rg) {
    tape.record([xn = x.node(), yn = y.node()] {
      if (yn->grad.empty()) return;
      simd::kernels<T>().relu_backward(xn->value.data(), yn->grad.data(), xn->grad_buffer(),
                                       yn->grad.size());
    });
  }
  return y;
}

template <typename T>
Tensor<T> tanh_act(Tape<T>& tape, const Tensor<T>& x) {
  std::vector<T> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(x[i]);
  const bool rg = tape.grad_enabled() && x.requires_grad();
  auto y = finish(tape, x.shape(), std::move(out), rg, "tanh");
  if (rg) {
    tape.record([xn = x.node(), yn = y.node()] {
      if (yn->grad.empty()) return;
      T* gx = xn->grad_buffer();
      for (std::size_t i = 0; i < yn->value.size(); ++i) {
        const T t = yn->value[i];
        gx[i] += yn->grad[i] * (T(1) - t * t);
      }
    });
  }
  return y;
}

template <typename T>
Tensor<T> softplus(Tape<T>& tape, const Tensor<T>& x) {
  std::vector<T> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const T v = x[i];
    out[i] = v > T(0) ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v));
  }
  const bool rg = tape.grad_enabled() && x.requires_grad();
  auto y = finish(tape, x.shape(), std::move(out), rg, "softplus");
  if (rg) {
    tape.record([xn = x.node(), yn = y.node()] {
      if (yn->grad.empty()) return;
      T* gx = xn->grad_buffer();
      for (std::size_t i = 0; i < xn->value.size(); ++i) {
        const T v = xn->value[i];
        const T sig = v >= T(0) ? T(1) / (T(1) + std::exp(-v))
                                : std::exp(v) / (T(1) + std::exp(v));
        gx[i] += yn->grad[i] * sig;
      }
    });
  }
  return y;
}

template <typename T>
Tensor<T> dropout(Tape<T>& tape, const Tensor<T>& x, double rate, bool training,
                  std::mt19937_64& rng) {
  if (!(rate >= 0.0 && rate < 1.0))
    throw ParameterError("dropout: rate must be in [0, 1), got " + std::to_string(rate));
  if (!training || rate == 0.0) return x;
  const T keep_scale = static_cast<T>(1.0 / (1.0 - rate));
  auto mask = std::make_shared<std::vector<T>>(x.size());
  for (auto& m : *mask) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    m = u < rate ? T(0) : keep_scale;
  }
  std::vector<T> out(x.size());
  simd::kernels<T>().mul(x.data().data(), mask->data(), out.data(), out.size());
  const bool rg = tape.grad_enabled() && x.requires_grad();
  auto y = finish(tape, x.shape(), std::move(out), rg, "dropout");
  if (rg) {
    tape.record([xn = x.node(), yn = y.node(), mask] {
      if (yn->grad.empty()) return;
      simd::kernels<T>().mul_acc(yn->grad.data(), mask->data(), xn->grad_buffer(),
                                 yn->grad.size());
    });
  }
  return y;
}

template <typename T>
Tensor<T> embedding_gather(Tape<T>& tape, const Tensor<T>& table,
                           std::span<const std::int32_t> ids,
                           std::optional<std::int32_t> padding_id) {
  require_rank(table, 2, "embedding_gather", "table");
  const std::size_t rows = table.dim(0), dim = table.dim(1);
  if (ids.empty()) throw DimensionError("embedding_gather: empty id list");
  std::vector<T> out(ids.size() * dim);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || static_cast<std::size_t>(ids[i]) >= rows)
      throw IndexError("embedding_gather: id " + std::to_string(ids[i]) + " at position " +
                       std::to_string(i) + " outside [0, " + std::to_string(rows) + ")");
    if (padding_id && ids[i] == *padding_id) continue;
    auto row = table.data().subspan(static_cast<std::size_t>(ids[i]) * dim, dim);
    std::copy(row.begin(), row.end(), out.begin() + i * dim);
  }
  const bool rg = tape.grad_enabled() && table.requires_grad();
  auto y = finish(tape, {ids.size(), dim}, std::move(out), rg, "embedding_gather");
  if (rg) {
    tape.record([tn = table.node(), yn = y.node(), ids = std::vector<std::int32_t>(ids.begin(), ids.end()),
                 padding_id, dim] {
      if (yn->grad.empty()) return;
      const auto& kt = simd::kernels<T>();
      T* gt = tn->grad_buffer();
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (padding_id && ids[i] == *padding_id) continue;
        kt.axpy(T(1), yn->grad.data() + i * dim, gt + static_cast<std::size_t>(ids[i]) * dim, dim);
      }
    });
  }
  return y;
}

#define DUET_INSTANTIATE_OPS(T)                                                              \
  template Tensor<T> matmul(Tape<T>&, const Tensor<T>&, const Tensor<T>&);                    \
  template Tensor<T> add_bias(Tape<T>&, const Tensor<T>&, const Tensor<T>&);                  \
  template Tensor<T> linear(Tape<T>&, const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);  \
  template Tensor<T> add(Tape<T>&, const Tensor<T>&, const Tensor<T>&);                       \
  template Tensor<T> sub(Tape<T>&, const Tensor<T>&, const Tensor<T>&);                       \
  template Tensor<T> mul(Tape<T>&, const Tensor<T>&, const Tensor<T>&);                       \
  template Tensor<T> mul_rows(Tape<T>&, const Tensor<T>&, const Tensor<T>&);                  \
  template Tensor<T> scale(Tape<T>&, const Tensor<T>&, T);                                    \
  template Tensor<T> sum(Tape<T>&, const Tensor<T>&);                                         \
  template Tensor<T> mean(Tape<T>&, const Tensor<T>&);                                        \
  template Tensor<T> concat(Tape<T>&, std::span<const Tensor<T>>, std::size_t);               \
  template Tensor<T> reshape(Tape<T>&, const Tensor<T>&, Shape);                              \
  template Tensor<T> transpose(Tape<T>&, const Tensor<T>&);                                   \
  template Tensor<T> conv1d(Tape<T>&, const Tensor<T>&, const Tensor<T>&, const Tensor<T>*,   \
                            Padding);                                                        \
  template Tensor<T> max_pool(Tape<T>&, const Tensor<T>&, std::size_t, std::size_t,           \
                              std::optional<std::size_t>);                                   \
  template Tensor<T> relu(Tape<T>&, const Tensor<T>&);                                        \
  template Tensor<T> tanh_act(Tape<T>&, const Tensor<T>&);                                    \
  template Tensor<T> softplus(Tape<T>&, const Tensor<T>&);                                    \
  template Tensor<T> dropout(Tape<T>&, const Tensor<T>&, double, bool, std::mt19937_64&);     \
  template Tensor<T> embedding_gather(Tape<T>&, const Tensor<T>&, std::span<const std::int32_t>, \
                                      std::optional<std::int32_t>);

DUET_INSTANTIATE_OPS(float)
DUET_INSTANTIATE_OPS(double)

#undef DUET_INSTANTIATE_OPS

}  // namespace duet::ndgrad
