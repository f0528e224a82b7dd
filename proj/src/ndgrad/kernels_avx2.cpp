// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include "duet/ndgrad/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define DUET_HAVE_AVX2 1
#endif

namespace duet::ndgrad::simd::detail {

#ifdef DUET_HAVE_AVX2
namespace {

template <typename T>
struct Lanes;

template <>
struct Lanes<float> {
  using Reg = __m256;
  static constexpr std::size_t width = 8;
  static Reg load(const float* p) { return _mm256_loadu_ps(p); }
  static void store(float* p, Reg v) { _mm256_storeu_ps(p, v); }
  static Reg zero() { return _mm256_setzero_ps(); }
  static Reg set1(float v) { return _mm256_set1_ps(v); }
  static Reg add(Reg a, Reg b) { return _mm256_add_ps(a, b); }
  static Reg mul(Reg a, Reg b) { return _mm256_mul_ps(a, b); }
  static Reg fmadd(Reg a, Reg b, Reg c) { return _mm256_fmadd_ps(a, b, c); }
  static Reg max(Reg a, Reg b) { return _mm256_max_ps(a, b); }
  static Reg gt_mask(Reg a, Reg b) { return _mm256_cmp_ps(a, b, _CMP_GT_OQ); }
  static Reg and_(Reg a, Reg b) { return _mm256_and_ps(a, b); }
  static float hsum(Reg v) {
    __m128 lo = _mm256_castps256_ps128(v);
    __m128 hi = _mm256_extractf128_ps(v, 1);
    lo = _mm_add_ps(lo, hi);
    __m128 shuf = _mm_movehdup_ps(lo);
    __m128 sums = _mm_add_ps(lo, shuf);
    shuf = _mm_movehl_ps(shuf, sums);
    sums = _mm_add_ss(sums, shuf);
    return _mm_cvtss_f32(sums);
  }
};

template <>
struct Lanes<double> {
  using Reg = __m256d;
  static constexpr std::size_t width = 4;
  static Reg load(const double* p) { return _mm256_loadu_pd(p); }
  static void store(double* p, Reg v) { _mm256_storeu_pd(p, v); }
  static Reg zero() { return _mm256_setzero_pd(); }
  static Reg set1(double v) { return _mm256_set1_pd(v); }
  static Reg add(Reg a, Reg b) { return _mm256_add_pd(a, b); }
  static Reg mul(Reg a, Reg b) { return _mm256_mul_pd(a, b); }
  static Reg fmadd(Reg a, Reg b, Reg c) { return _mm256_fmadd_pd(a, b, c); }
  static Reg max(Reg a, Reg b) { return _mm256_max_pd(a, b); }
  static Reg gt_mask(Reg a, Reg b) { return _mm256_cmp_pd(a, b, _CMP_GT_OQ); }
  static Reg and_(Reg a, Reg b) { return _mm256_and_pd(a, b); }
  static double hsum(Reg v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d high64 = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, high64));
  }
};

template <typename T>
T dot(const T* a, const T* b, std::size_t n) {
  using L = Lanes<T>;
  constexpr std::size_t w = L::width;
  auto acc0 = L::zero();
  auto acc1 = L::zero();
  std::size_t i = 0;
  for (; i + 2 * w <= n; i += 2 * w) {
    acc0 = L::fmadd(L::load(a + i), L::load(b + i), acc0);
    acc1 = L::fmadd(L::load(a + i + w), L::load(b + i + w), acc1);
  }
  for (; i + w <= n; i += w) acc0 = L::fmadd(L::load(a + i), L::load(b + i), acc0);
  T acc = L::hsum(L::add(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

template <typename T>
void axpy(T alpha, const T* x, T* y, std::size_t n) {
  using L = Lanes<T>;
  constexpr std::size_t w = L::width;
  const auto va = L::set1(alpha);
  std::size_t i = 0;
  for (; i + w <= n; i += w) L::store(y + i, L::fmadd(va, L::load(x + i), L::load(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

template <typename T>
void add(const T* a, const T* b, T* out, std::size_t n) {
  using L = Lanes<T>;
  constexpr std::size_t w = L::width;
  std::size_t i = 0;
  for (; i + w <= n; i += w) L::store(out + i, L::add(L::load(a + i), L::load(b + i)));
  for (; i < n; ++i) out[i] = a[i] + b[i];
}

template <typename T>
void mul(const T* a, const T* b, T* out, std::size_t n) {
  using L = Lanes<T>;
  constexpr std::size_t w = L::width;
  std::size_t i = 0;
  for (; i + w <= n; i += w) L::store(out + i, L::mul(L::load(a + i), L::load(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

template <typename T>
void mul_acc(const T* a, const T* b, T* y, std::size_t n) {
  using L = Lanes<T>;
  constexpr std::size_t w = L::width;
  std::size_t i = 0;
  for (; i + w <= n; i += w)
    L::store(y + i, L::fmadd(L::load(a + i), L::load(b + i), L::load(y + i)));
  for (; i < n; ++i) y[i] += a[i] * b[i];
}

template <typename T>
void scale(T alpha, const T* x, T* out, std::size_t n) {
  using L = Lanes<T>;
  constexpr std::size_t w = L::width;
  const auto va = L::set1(alpha);
  std::size_t i = 0;
  for (; i + w <= n; i += w) L::store(out + i, L::mul(va, L::load(x + i)));
  for (; i < n; ++i) out[i] = alpha * x[i];
}

template <typename T>
void relu(const T* x, T* out, std::size_t n) {
  using L = Lanes<T>;
  constexpr std::size_t w = L::width;
  const auto z = L::zero();
  std::size_t i = 0;
  // maxps returns the second operand for NaN, matching the scalar x > 0 test
  for (; i + w <= n; i += w) L::store(out + i, L::max(L::load(x + i), z));
  for (; i < n; ++i) out[i] = x[i] > T(0) ? x[i] : T(0);
}

template <typename T>
void relu_backward(const T* x, const T* g, T* gx, std::size_t n) {
  using L = Lanes<T>;
  constexpr std::size_t w = L::width;
  const auto z = L::zero();
  std::size_t i = 0;
  for (; i + w <= n; i += w) {
    const auto m = L::gt_mask(L::load(x + i), z);
    L::store(gx + i, L::add(L::load(gx + i), L::and_(m, L::load(g + i))));
  }
  for (; i < n; ++i)
    if (x[i] > T(0)) gx[i] += g[i];
}

template <typename T>
constexpr KernelTable<T> kTable{&dot<T>,  &axpy<T>,    &add<T>,  &mul<T>,
                                &mul_acc<T>, &scale<T>, &relu<T>, &relu_backward<T>};

}  // namespace

template <typename T>
const KernelTable<T>& avx2_table() {
  return kTable<T>;
}

#else

template <typename T>
const KernelTable<T>& avx2_table() {
  return scalar_table<T>();
}

#endif

template const KernelTable<float>& avx2_table<float>();
template const KernelTable<double>& avx2_table<double>();

}  // namespace duet::ndgrad::simd::detail
