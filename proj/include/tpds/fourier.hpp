#pragma once

// Mode-3 discrete Fourier transform. Transforming every tube of a tensor
// block-diagonalizes its block-circulant matrix: the r diagonal blocks are the
// "Fourier blocks", block k belonging to frequency k (0-based).

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tpds/detail/fft.hpp"
#include "tpds/detail/parallel.hpp"
#include "tpds/tensor3.hpp"

namespace tpds {

struct FourierBlocks {
  Dims dims;
  std::vector<CMatrix> blocks;
  /// Set when the blocks came from a real tensor, i.e. block r-k is exactly
  /// the conjugate of block k.
  bool conjugate_symmetric = false;

  std::size_t size() const { return blocks.size(); }
  const CMatrix& operator[](std::size_t k) const { return blocks[k]; }
  CMatrix& operator[](std::size_t k) { return blocks[k]; }
};

/// Per-block failure raised through block_map, tagged with the block index.
class BlockFailure : public Error {
 public:
  BlockFailure(std::size_t block, const std::string& what)
      : Error("Fourier block " + std::to_string(block) + ": " + what), block_index(block) {}
  std::size_t block_index;
};

/// Unnormalized forward DFT of every tube. For real input the output is made
/// exactly conjugate-symmetric and the self-conjugate blocks (frequency 0,
/// and r/2 for even r) exactly real.
inline FourierBlocks dft_mode3(const Tensor3& t) {
  const auto n = t.rows(), m = t.cols(), r = t.depth();
  const auto len = static_cast<std::size_t>(n * m);
  const auto ur = static_cast<std::size_t>(r);
  std::vector<detail::cplx> buf(t.data().begin(), t.data().end());
  detail::dft_slices(buf, ur, len, false);

  FourierBlocks out{t.dims(), std::vector<CMatrix>(ur), true};
  for (std::size_t k = 0; k <= ur / 2; ++k) {
    out.blocks[k] = Eigen::Map<const CMatrix>(buf.data() + k * len, n, m);
    if (k == 0 || 2 * k == ur) out.blocks[k] = out.blocks[k].real().cast<std::complex<double>>();
  }
  for (std::size_t k = ur / 2 + 1; k < ur; ++k) out.blocks[k] = out.blocks[ur - k].conjugate();
  return out;
}

struct IdftOptions {
  /// Throw ImaginaryResidualExceeded when the residual reaches the tolerance.
  bool strict = true;
  /// Absolute tolerance; defaults to 1e-8 times the largest result modulus.
  std::optional<double> tol_imag;
};

struct InverseTransform {
  Tensor3 tensor;
  double max_imag = 0.0;
};

/// Inverse DFT of every tube (scaled by 1/r). Returns the real part and the
/// largest imaginary residual.
inline InverseTransform idft_mode3(const FourierBlocks& b, IdftOptions opts = {}) {
  if (b.blocks.empty()) throw ShapeMismatch("no Fourier blocks");
  const auto n = b.blocks[0].rows(), m = b.blocks[0].cols();
  for (const auto& blk : b.blocks) {
    if (blk.rows() != n || blk.cols() != m) throw ShapeMismatch("Fourier blocks differ in shape");
  }
  const auto ur = b.blocks.size();
  const auto len = static_cast<std::size_t>(n * m);
  std::vector<detail::cplx> buf(ur * len);
  for (std::size_t k = 0; k < ur; ++k) {
    Eigen::Map<CMatrix>(buf.data() + k * len, n, m) = b.blocks[k];
  }
  detail::dft_slices(buf, ur, len, true);

  Tensor3 t(n, m, static_cast<Index>(ur));
  auto data = t.data();
  const double scale = 1.0 / static_cast<double>(ur);
  double max_imag = 0.0, max_mod = 0.0;
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const auto v = buf[i] * scale;
    data[i] = v.real();
    max_imag = std::max(max_imag, std::abs(v.imag()));
    max_mod = std::max(max_mod, std::abs(v));
  }
  if (opts.strict) {
    const double tol = opts.tol_imag.value_or(1e-8 * max_mod);
    if (max_imag > 0.0 && max_imag >= tol) throw ImaginaryResidualExceeded(max_imag);
  }
  return {std::move(t), max_imag};
}

using BlockFn = std::function<CMatrix(const CMatrix&, std::size_t)>;

/// Applies `f` to every block independently. Failures carry the block index;
/// when several blocks fail, the lowest index is reported.
inline FourierBlocks block_map(const FourierBlocks& b, const BlockFn& f, int threads = 1) {
  FourierBlocks out{b.dims, std::vector<CMatrix>(b.size()), false};
  detail::parallel_for(b.size(), threads, [&](std::size_t k) {
    try {
      out.blocks[k] = f(b.blocks[k], k);
    } catch (const Singular&) {
      throw;
    } catch (const DefectiveBlock&) {
      throw;
    } catch (const BlockFailure&) {
      throw;
    } catch (const std::exception& e) {
      throw BlockFailure(k, e.what());
    }
  });
  if (!out.blocks.empty()) out.dims = {out.blocks[0].rows(), out.blocks[0].cols(), b.dims.r};
  return out;
}

/// Like block_map, for functions that commute with complex conjugation
/// (f(conj X) = conj f(X)). Only blocks 0..r/2 are evaluated; the rest are
/// filled in as conjugates, so a real-sourced input yields a real-sourced
/// output. Falls back to block_map for non-symmetric input.
inline FourierBlocks block_map_conjugate(const FourierBlocks& b, const BlockFn& f, int threads = 1) {
  if (!b.conjugate_symmetric) return block_map(b, f, threads);
  const std::size_t r = b.size();
  FourierBlocks half{b.dims, std::vector<CMatrix>(b.blocks.begin(), b.blocks.begin() + (r / 2 + 1)), false};
  FourierBlocks mapped = block_map(half, f, threads);
  FourierBlocks out{mapped.dims, std::vector<CMatrix>(r), true};
  for (std::size_t k = 0; k <= r / 2; ++k) out.blocks[k] = std::move(mapped.blocks[k]);
  for (std::size_t k = r / 2 + 1; k < r; ++k) out.blocks[k] = out.blocks[r - k].conjugate();
  for (std::size_t k : {std::size_t{0}, r / 2}) {
    if (k == 0 || 2 * k == r) out.blocks[k] = out.blocks[k].real().cast<std::complex<double>>();
  }
  return out;
}

/// Blockwise product of two transformed tensors.
inline FourierBlocks block_multiply(const FourierBlocks& a, const FourierBlocks& b) {
  if (a.size() != b.size()) throw DimensionMismatch("third modes differ");
  FourierBlocks out{{a.dims.n, b.dims.m, a.dims.r}, std::vector<CMatrix>(a.size()),
                    a.conjugate_symmetric && b.conjugate_symmetric};
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a.blocks[k].cols() != b.blocks[k].rows()) throw DimensionMismatch("inner block dimensions differ");
    out.blocks[k].noalias() = a.blocks[k] * b.blocks[k];
  }
  return out;
}

}  // namespace tpds
