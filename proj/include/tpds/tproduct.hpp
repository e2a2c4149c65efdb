#pragma once

// T-product and the tensor operations that go through the Fourier domain:
// inverse, right pseudoinverse, T-orthogonality.

#include <optional>
#include <vector>

#include "tpds/fourier.hpp"
#include "tpds/linalg.hpp"
#include "tpds/tensor3.hpp"

namespace tpds {

enum class ProductPath {
  automatic,  ///< literal for r < 4, Fourier otherwise
  literal,    ///< fold(bcirc(a) * unfold(b))
  fourier,    ///< blockwise product in the Fourier domain
};

inline void check_product_dims(const Tensor3& a, const Tensor3& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("t_product inner modes differ: " + to_string(a.dims()) + " * " + to_string(b.dims()));
  }
  if (a.depth() != b.depth()) {
    throw DimensionMismatch("t_product third modes differ: " + to_string(a.dims()) + " * " + to_string(b.dims()));
  }
}

/// Literal definition: fold(bcirc(a) * unfold(b)), evaluated slice by slice
/// without materializing bcirc(a).
inline Tensor3 t_product_literal(const Tensor3& a, const Tensor3& b) {
  check_product_dims(a, b);
  const Index r = a.depth();
  Tensor3 c(a.rows(), b.cols(), r);
  for (Index k = 0; k < r; ++k) {
    auto out = c.slice(k);
    for (Index j = 0; j < r; ++j) out.noalias() += a.slice((k - j + r) % r) * b.slice(j);
  }
  return c;
}

inline Tensor3 t_product_fourier(const Tensor3& a, const Tensor3& b) {
  check_product_dims(a, b);
  return idft_mode3(block_multiply(dft_mode3(a), dft_mode3(b))).tensor;
}

inline Tensor3 t_product(const Tensor3& a, const Tensor3& b, ProductPath path = ProductPath::automatic) {
  switch (path) {
    case ProductPath::literal:
      return t_product_literal(a, b);
    case ProductPath::fourier:
      return t_product_fourier(a, b);
    case ProductPath::automatic:
      break;
  }
  return a.depth() < 4 ? t_product_literal(a, b) : t_product_fourier(a, b);
}

/// Singular values of every Fourier block, plus the global maximum (which
/// equals ||bcirc(t)||_2).
struct BlockSpectrum {
  std::vector<Vector> singular_values;
  double sigma_max = 0.0;
};

inline BlockSpectrum block_singular_values(const FourierBlocks& b) {
  BlockSpectrum out;
  out.singular_values.reserve(b.size());
  for (const auto& blk : b.blocks) {
    out.singular_values.push_back(singular_values(blk));
    if (out.singular_values.back().size()) out.sigma_max = std::max(out.sigma_max, out.singular_values.back()(0));
  }
  return out;
}

/// Rank threshold for bcirc(t) computed from its Fourier blocks, so that the
/// per-block ranks sum to the dense rank of bcirc(t).
inline double bcirc_rank_threshold(const Dims& d, double sigma_max, const Tolerances& tol) {
  return tol.rank_factor(d.n * d.r, d.m * d.r) * sigma_max;
}

/// T-inverse via per-block inversion. Throws Singular for the first block
/// whose smallest singular value is at or below tol_rank * sigma_max.
inline Tensor3 t_inverse(const Tensor3& t, const Tolerances& tol = {}) {
  if (t.rows() != t.cols()) throw ShapeMismatch("t_inverse needs square frontal slices, got " + to_string(t.dims()));
  const auto blocks = dft_mode3(t);
  const auto spec = block_singular_values(blocks);
  const double threshold = bcirc_rank_threshold(t.dims(), spec.sigma_max, tol);
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const double smin = spec.singular_values[k](spec.singular_values[k].size() - 1);
    if (!(smin > threshold)) throw Singular(k, smin);
  }
  auto inv = block_map_conjugate(blocks, [](const CMatrix& x, std::size_t) -> CMatrix { return x.inverse(); });
  return idft_mode3(inv).tensor;
}

struct RightPinv {
  Tensor3 tensor;
  std::vector<Index> ranks;  ///< numerical rank of every Fourier block
  double threshold = 0.0;    ///< absolute singular-value cutoff used
  double max_imag = 0.0;
};

/// Moore-Penrose pseudoinverse of bcirc(t), computed blockwise. When bcirc(t)
/// has full row rank it is a right T-inverse: t * pinv = identity.
inline RightPinv t_right_pinv_detail(const Tensor3& t, const Tolerances& tol = {}, int threads = 1) {
  const auto blocks = dft_mode3(t);
  const auto spec = block_singular_values(blocks);
  const double threshold = bcirc_rank_threshold(t.dims(), spec.sigma_max, tol);
  RightPinv out;
  out.threshold = threshold;
  for (const auto& sv : spec.singular_values) out.ranks.push_back(count_above(sv, threshold));
  auto p = block_map_conjugate(
      blocks, [threshold](const CMatrix& x, std::size_t) -> CMatrix { return pinv(x, threshold); }, threads);
  auto inv = idft_mode3(p);
  out.tensor = std::move(inv.tensor);
  out.max_imag = inv.max_imag;
  return out;
}

inline Tensor3 t_right_pinv(const Tensor3& t, const Tolerances& tol = {}) { return t_right_pinv_detail(t, tol).tensor; }

/// True when t * t^T and t^T * t are both within `tol` (max-abs) of the identity.
inline bool is_t_orthogonal(const Tensor3& t, double tol) {
  if (t.rows() != t.cols()) return false;
  const auto id = t_identity(t.rows(), t.depth());
  const auto tt = t_transpose(t);
  return max_abs_diff(t_product(t, tt), id) <= tol && max_abs_diff(t_product(tt, t), id) <= tol;
}

}  // namespace tpds
