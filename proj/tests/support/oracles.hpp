#pragma once

// Independent reference computations used by the unit and acceptance
// suites. Nothing here touches the tape or the SIMD kernels.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace duet::testing {

inline std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double lo = -2.0,
                                         double hi = 2.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

// c[i][j] = sum_p a[i][p] * b[p][j]
inline std::vector<double> matmul_oracle(const std::vector<double>& a, const std::vector<double>& b,
                                         std::size_t m, std::size_t k, std::size_t n) {
  std::vector<double> c(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0;
      for (std::size_t p = 0; p < k; ++p) acc += a[i * k + p] * b[p * n + j];
      c[i * n + j] = acc;
    }
  return c;
}

// Direct nested-sum cross-correlation, zero padding `pad_left` on the left.
inline std::vector<double> conv1d_oracle(const std::vector<double>& x, std::size_t channels,
                                         std::size_t length, const std::vector<double>& w,
                                         std::size_t filters, std::size_t width,
                                         std::size_t pad_left, std::size_t out_len) {
  std::vector<double> out(filters * out_len, 0.0);
  for (std::size_t f = 0; f < filters; ++f)
    for (std::size_t t = 0; t < out_len; ++t) {
      double acc = 0;
      for (std::size_t c = 0; c < channels; ++c)
        for (std::size_t k = 0; k < width; ++k) {
          const long pos = static_cast<long>(t + k) - static_cast<long>(pad_left);
          if (pos < 0 || pos >= static_cast<long>(length)) continue;
          acc += w[(f * channels + c) * width + k] * x[c * length + static_cast<std::size_t>(pos)];
        }
      out[f * out_len + t] = acc;
    }
  return out;
}

inline std::vector<double> max_pool_oracle(const std::vector<double>& x, std::size_t channels,
                                           std::size_t length, std::size_t window,
                                           std::size_t stride) {
  std::vector<double> out;
  for (std::size_t c = 0; c < channels; ++c)
    for (std::size_t s = 0; s + window <= length; s += stride) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t p = s; p < s + window; ++p) best = std::max(best, x[c * length + p]);
      out.push_back(best);
    }
  return out;
}

// Reciprocal rank from a full descending score scan, ties by ascending id.
inline double brute_force_rr(const std::vector<std::pair<std::int64_t, double>>& scored,
                             const std::set<std::int64_t>& relevant, std::size_t k) {
  for (std::size_t r = 1; r <= k && r <= scored.size(); ++r) {
    // find the r-th element by selection: count items strictly ahead of each
    for (const auto& [id, s] : scored) {
      std::size_t ahead = 0;
      for (const auto& [id2, s2] : scored)
        if (s2 > s || (s2 == s && id2 < id)) ++ahead;
      if (ahead + 1 == r) {
        if (relevant.count(id)) return 1.0 / static_cast<double>(r);
        break;
      }
    }
  }
  return 0.0;
}

}  // namespace duet::testing
