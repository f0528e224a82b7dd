#include "duet/ndgrad/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "duet/error.hpp"

namespace duet::ndgrad::simd {
namespace {

bool host_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detect_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2: {
      static const bool ok = host_has_avx2();
      return ok;
    }
  }
  return false;
}

Isa detect_isa() {
  if (const char* env = std::getenv("DUETRANK_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && isa_supported(Isa::avx2)) return Isa::avx2;
  }
  return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (!isa_supported(isa))
    throw ParameterError("SIMD variant '" + std::string(isa_name(isa)) +
                         "' is not supported on this host");
  active().store(isa, std::memory_order_relaxed);
}

template <typename T>
const KernelTable<T>& kernels(Isa isa) {
  return isa == Isa::avx2 ? detail::avx2_table<T>() : detail::scalar_table<T>();
}

template <typename T>
void gemm(std::size_t m, std::size_t k, std::size_t n, const T* a, const T* b,
          T* c) {
  const auto& kt = kernels<T>();
  for (std::size_t i = 0; i < m; ++i) {
    T* crow = c + i * n;
    const T* arow = a + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const T av = arow[p];
      if (av != T(0)) kt.axpy(av, b + p * n, crow, n);
    }
  }
}

template <typename T>
void gemm_bt(std::size_t m, std::size_t k, std::size_t n, const T* a,
             const T* b, T* c) {
  const auto& kt = kernels<T>();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) c[i * n + j] += kt.dot(a + i * k, b + j * k, k);
}

template <typename T>
void gemm_at(std::size_t m, std::size_t k, std::size_t n, const T* a,
             const T* b, T* c) {
  const auto& kt = kernels<T>();
  for (std::size_t p = 0; p < k; ++p) {
    const T* arow = a + p * m;
    const T* brow = b + p * n;
    for (std::size_t i = 0; i < m; ++i) {
      const T av = arow[i];
      if (av != T(0)) kt.axpy(av, brow, c + i * n, n);
    }
  }
}

template const KernelTable<float>& kernels<float>(Isa);
template const KernelTable<double>& kernels<double>(Isa);
template void gemm<float>(std::size_t, std::size_t, std::size_t, const float*, const float*, float*);
template void gemm<double>(std::size_t, std::size_t, std::size_t, const double*, const double*, double*);
template void gemm_bt<float>(std::size_t, std::size_t, std::size_t, const float*, const float*, float*);
template void gemm_bt<double>(std::size_t, std::size_t, std::size_t, const double*, const double*, double*);
template void gemm_at<float>(std::size_t, std::size_t, std::size_t, const float*, const float*, float*);
template void gemm_at<double>(std::size_t, std::size_t, std::size_t, const double*, const double*, double*);

}  // namespace duet::ndgrad::simd
