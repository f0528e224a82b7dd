#pragma once

// Dense inner-loop kernels. Every kernel has a portable scalar reference
// and an AVX2+FMA variant; the variant is picked once at startup from the
// host CPU and can be pinned with DUETRANK_SIMD=scalar|avx2 or set_isa().

#include <cstddef>
#include <string_view>

namespace duet::ndgrad::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

bool isa_supported(Isa isa);

// Best ISA the host supports, honoring DUETRANK_SIMD when it names a
// supported ISA.
Isa detect_isa();

Isa active_isa();

// Throws ParameterError if the host cannot run `isa`.
void set_isa(Isa isa);

template <typename T>
struct KernelTable {
  T (*dot)(const T* a, const T* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(T alpha, const T* x, T* y, std::size_t n);
  // out = a + b
  void (*add)(const T* a, const T* b, T* out, std::size_t n);
  // out = a * b
  void (*mul)(const T* a, const T* b, T* out, std::size_t n);
  // y += a * b
  void (*mul_acc)(const T* a, const T* b, T* y, std::size_t n);
  // out = alpha * x
  void (*scale)(T alpha, const T* x, T* out, std::size_t n);
  // out = max(x, 0)
  void (*relu)(const T* x, T* out, std::size_t n);
  // gx += (x > 0) ? g : 0
  void (*relu_backward)(const T* x, const T* g, T* gx, std::size_t n);
};

template <typename T>
const KernelTable<T>& kernels(Isa isa);

template <typename T>
const KernelTable<T>& kernels() {
  return kernels<T>(active_isa());
}

// Row-major GEMM family built on the active table.
// c (m×n) += a (m×k) · b (k×n)
template <typename T>
void gemm(std::size_t m, std::size_t k, std::size_t n, const T* a, const T* b,
          T* c);
// c (m×n) += a (m×k) · bᵀ, with b stored n×k
template <typename T>
void gemm_bt(std::size_t m, std::size_t k, std::size_t n, const T* a,
             const T* b, T* c);
// c (m×n) += aᵀ · b, with a stored k×m and b stored k×n
template <typename T>
void gemm_at(std::size_t m, std::size_t k, std::size_t n, const T* a,
             const T* b, T* c);

namespace detail {
template <typename T>
const KernelTable<T>& scalar_table();
template <typename T>
const KernelTable<T>& avx2_table();
}  // namespace detail

}  // namespace duet::ndgrad::simd
