#pragma once

// Batched DFT over a sequence of equally sized vectors ("slices"): element e
// of output slice k is sum_j w^(j*k) * x_j[e] with w = exp(-2*pi*i/r) (or its
// conjugate for the inverse direction, which is left unscaled here).
//
// Power-of-two lengths use an iterative radix-2 transform; other lengths fall
// back to the direct O(r^2) sum.

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

namespace tpds::detail {

using cplx = std::complex<double>;

inline bool is_pow2(std::size_t r) { return r != 0 && (r & (r - 1)) == 0; }

inline std::vector<cplx> twiddles(std::size_t r, bool inverse) {
  std::vector<cplx> w(r);
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t j = 0; j < r; ++j) {
    // Exact values at the quarter points keep r = 2 and r = 4 transforms exact.
    if (j == 0) {
      w[j] = {1.0, 0.0};
    } else if (4 * j == 2 * r) {
      w[j] = {-1.0, 0.0};
    } else if (4 * j == r) {
      w[j] = {0.0, sign};
    } else if (4 * j == 3 * r) {
      w[j] = {0.0, -sign};
    } else {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(r);
      w[j] = {std::cos(a), sign * std::sin(a)};
    }
  }
  return w;
}

/// In-place transform of `buf`, which holds r slices of `len` elements each.
inline void dft_slices(std::vector<cplx>& buf, std::size_t r, std::size_t len, bool inverse) {
  if (r <= 1) return;
  const auto w = twiddles(r, inverse);

  if (!is_pow2(r)) {
    std::vector<cplx> out(buf.size(), cplx{0.0, 0.0});
    for (std::size_t k = 0; k < r; ++k) {
      cplx* dst = out.data() + k * len;
      for (std::size_t j = 0; j < r; ++j) {
        const cplx wk = w[(j * k) % r];
        const cplx* src = buf.data() + j * len;
        for (std::size_t e = 0; e < len; ++e) dst[e] += wk * src[e];
      }
    }
    buf = std::move(out);
    return;
  }

  // Bit-reversal permutation of whole slices.
  for (std::size_t i = 1, j = 0; i < r; ++i) {
    std::size_t bit = r >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      for (std::size_t e = 0; e < len; ++e) std::swap(buf[i * len + e], buf[j * len + e]);
    }
  }

  for (std::size_t size = 2; size <= r; size <<= 1) {
    const std::size_t half = size / 2;
    const std::size_t step = r / size;
    for (std::size_t start = 0; start < r; start += size) {
      for (std::size_t j = 0; j < half; ++j) {
        const cplx wj = w[j * step];
        cplx* a = buf.data() + (start + j) * len;
        cplx* b = buf.data() + (start + j + half) * len;
        for (std::size_t e = 0; e < len; ++e) {
          const cplx t = wj * b[e];
          b[e] = a[e] - t;
          a[e] += t;
        }
      }
    }
  }
}

}  // namespace tpds::detail
