#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "duet/ndgrad/kernels.hpp"

using namespace duet::ndgrad::simd;

namespace {

template <typename T>
std::vector<T> randoms(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  std::vector<T> v(n);
  for (auto& x : v) x = static_cast<T>(dist(rng));
  return v;
}

template <typename T>
void check_close(const std::vector<T>& a, const std::vector<T>& b, double tol) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i])) <=
          tol * (1.0 + std::abs(static_cast<double>(a[i]))));
}

// Every vector variant must agree with the scalar reference on sizes that
// exercise full lanes, partial tails and the empty case.
template <typename T>
void equivalence(double tol) {
  if (!isa_supported(Isa::avx2)) return;
  const auto& ref = kernels<T>(Isa::scalar);
  const auto& vec = kernels<T>(Isa::avx2);
  std::mt19937_64 rng(17);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 64u, 300u, 1001u}) {
    auto a = randoms<T>(rng, n), b = randoms<T>(rng, n), y = randoms<T>(rng, n);
    const T alpha = static_cast<T>(0.37);

    CHECK(std::abs(static_cast<double>(ref.dot(a.data(), b.data(), n) - vec.dot(a.data(), b.data(), n))) <=
          tol * (1.0 + static_cast<double>(n)));

    auto y1 = y, y2 = y;
    ref.axpy(alpha, a.data(), y1.data(), n);
    vec.axpy(alpha, a.data(), y2.data(), n);
    check_close(y1, y2, tol);

    std::vector<T> o1(n), o2(n);
    ref.add(a.data(), b.data(), o1.data(), n);
    vec.add(a.data(), b.data(), o2.data(), n);
    CHECK(o1 == o2);
    ref.mul(a.data(), b.data(), o1.data(), n);
    vec.mul(a.data(), b.data(), o2.data(), n);
    CHECK(o1 == o2);
    ref.scale(alpha, a.data(), o1.data(), n);
    vec.scale(alpha, a.data(), o2.data(), n);
    CHECK(o1 == o2);
    ref.relu(a.data(), o1.data(), n);
    vec.relu(a.data(), o2.data(), n);
    CHECK(o1 == o2);

    y1 = y, y2 = y;
    ref.mul_acc(a.data(), b.data(), y1.data(), n);
    vec.mul_acc(a.data(), b.data(), y2.data(), n);
    check_close(y1, y2, tol);

    y1 = y, y2 = y;
    ref.relu_backward(a.data(), b.data(), y1.data(), n);
    vec.relu_backward(a.data(), b.data(), y2.data(), n);
    CHECK(y1 == y2);
  }
}

template <typename T>
std::vector<T> run_gemms(Isa isa, const std::vector<T>& a, const std::vector<T>& b,
                         const std::vector<T>& bt, const std::vector<T>& at, std::size_t m,
                         std::size_t k, std::size_t n) {
  const Isa saved = active_isa();
  set_isa(isa);
  std::vector<T> out(3 * m * n, T(0));
  gemm<T>(m, k, n, a.data(), b.data(), out.data());
  gemm_bt<T>(m, k, n, a.data(), bt.data(), out.data() + m * n);
  gemm_at<T>(m, k, n, at.data(), b.data(), out.data() + 2 * m * n);
  set_isa(saved);
  return out;
}

}  // namespace

TEST_CASE("vector kernels match the scalar reference (float)") { equivalence<float>(1e-5); }
TEST_CASE("vector kernels match the scalar reference (double)") { equivalence<double>(1e-12); }

TEST_CASE("gemm family agrees across ISAs") {
  if (!isa_supported(Isa::avx2)) return;
  std::mt19937_64 rng(23);
  const std::size_t m = 7, k = 19, n = 13;
  auto a = randoms<float>(rng, m * k), b = randoms<float>(rng, k * n);
  auto bt = randoms<float>(rng, n * k), at = randoms<float>(rng, k * m);
  check_close(run_gemms(Isa::scalar, a, b, bt, at, m, k, n), run_gemms(Isa::avx2, a, b, bt, at, m, k, n), 1e-5);
}

TEST_CASE("isa selection") {
  CHECK(isa_supported(Isa::scalar));
  const Isa saved = active_isa();
  set_isa(Isa::scalar);
  CHECK(active_isa() == Isa::scalar);
  set_isa(saved);
  CHECK(isa_name(Isa::avx2) == "avx2");
}
