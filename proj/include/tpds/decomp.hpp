#pragma once

// T-eigenvalue and T-singular-value decompositions. Both are computed block by
// block in the Fourier domain; tuples are reported in the Fourier domain (one
// tuple per frequency), factors are assembled with the inverse transform.

#include <complex>
#include <vector>

#include "tpds/fourier.hpp"
#include "tpds/linalg.hpp"
#include "tpds/tproduct.hpp"

namespace tpds {

enum class TupleKind { eigen, singular };

/// Eigentuples or singular tuples; tuples[k] belongs to Fourier block k.
/// Singular tuples are real, stored with zero imaginary part.
struct TupleSet {
  TupleKind kind = TupleKind::eigen;
  std::vector<CVector> tuples;

  std::size_t size() const { return tuples.size(); }
  const CVector& operator[](std::size_t k) const { return tuples[k]; }
  CVector& operator[](std::size_t k) { return tuples[k]; }

  /// Every entry of every tuple, in block order.
  std::vector<std::complex<double>> flatten() const {
    std::vector<std::complex<double>> out;
    for (const auto& t : tuples) out.insert(out.end(), t.data(), t.data() + t.size());
    return out;
  }
};

struct TEig {
  Tensor3 u;  ///< real part of the assembled eigenvector tensor
  Tensor3 d;  ///< real part of the assembled T-diagonal tensor
  FourierBlocks u_blocks;
  FourierBlocks d_blocks;
  TupleSet tuples;
  /// False when a self-conjugate block has complex eigenvalues, in which case
  /// u and d are not real and only the Fourier-domain factors are exact.
  bool real_factors = true;
  std::vector<std::size_t> defective_blocks;

  /// Throws DefectiveBlock for the first defective block, if any.
  void require_factors() const {
    if (!defective_blocks.empty()) throw DefectiveBlock(defective_blocks.front());
  }
};

struct TSvd {
  Tensor3 u;
  Tensor3 s;
  Tensor3 v;
  TupleSet tuples;
};

namespace detail {

inline bool self_conjugate(std::size_t k, std::size_t r) { return k == 0 || 2 * k == r; }

inline std::vector<Index> eigen_order(const CVector& v) {
  std::vector<Index> idx(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) idx[static_cast<std::size_t>(i)] = i;
  std::sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    const auto x = v(a), y = v(b);
    const double mx = std::abs(x), my = std::abs(y);
    if (mx != my) return mx > my;
    const double ax = std::arg(x), ay = std::arg(y);
    if (ax != ay) return ax < ay;
    return x.real() < y.real();
  });
  return idx;
}

struct BlockEig {
  CVector values;
  CMatrix vectors;
  bool real = true;
};

// Eigenpairs of one block, sorted by the tuple ordering convention.
inline BlockEig block_eig(const CMatrix& blk, bool self_conj, bool want_vectors) {
  BlockEig out;
  CVector vals;
  CMatrix vecs;
  if (self_conj) {
    Eigen::EigenSolver<Matrix> es(blk.real(), want_vectors);
    vals = es.eigenvalues();
    if (want_vectors) vecs = es.eigenvectors();
    out.real = (vals.imag().array() == 0.0).all();
  } else {
    Eigen::ComplexEigenSolver<CMatrix> es(blk, want_vectors);
    vals = es.eigenvalues();
    if (want_vectors) vecs = es.eigenvectors();
    out.real = false;
  }
  const auto order = eigen_order(vals);
  out.values.resize(vals.size());
  if (want_vectors) out.vectors.resize(vecs.rows(), vecs.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.values(static_cast<Index>(i)) = vals(order[i]);
    if (want_vectors) out.vectors.col(static_cast<Index>(i)) = vecs.col(order[i]);
  }
  return out;
}

inline void require_square(const Tensor3& t, const char* what) {
  if (t.rows() != t.cols()) {
    throw ShapeMismatch(std::string(what) + " needs square frontal slices, got " + to_string(t.dims()));
  }
}

}  // namespace detail

/// Eigentuples only, skipping factor assembly.
inline TupleSet eigentuples(const FourierBlocks& blocks) {
  const std::size_t r = blocks.size();
  TupleSet out{TupleKind::eigen, std::vector<CVector>(r)};
  const std::size_t last = blocks.conjugate_symmetric ? r / 2 : r - 1;
  for (std::size_t k = 0; k <= last && k < r; ++k) {
    out.tuples[k] = detail::block_eig(blocks[k], blocks.conjugate_symmetric && detail::self_conjugate(k, r), false).values;
  }
  for (std::size_t k = last + 1; k < r; ++k) out.tuples[k] = sort_eigenvalues(out.tuples[r - k].conjugate());
  return out;
}

inline TupleSet eigentuples(const Tensor3& t) {
  detail::require_square(t, "eigentuples");
  return eigentuples(dft_mode3(t));
}

/// Singular tuples, descending within each block.
inline TupleSet singular_tuples(const FourierBlocks& blocks) {
  const std::size_t r = blocks.size();
  TupleSet out{TupleKind::singular, std::vector<CVector>(r)};
  const std::size_t last = blocks.conjugate_symmetric ? r / 2 : r - 1;
  for (std::size_t k = 0; k <= last && k < r; ++k) {
    Vector s;
    if (blocks.conjugate_symmetric && detail::self_conjugate(k, r)) {
      s = Eigen::BDCSVD<Matrix>(blocks[k].real()).singularValues();
    } else {
      s = Eigen::BDCSVD<CMatrix>(blocks[k]).singularValues();
    }
    out.tuples[k] = s.cast<std::complex<double>>();
  }
  for (std::size_t k = last + 1; k < r; ++k) out.tuples[k] = out.tuples[r - k];
  return out;
}

inline TupleSet singular_tuples(const Tensor3& t) { return singular_tuples(dft_mode3(t)); }

/// Largest eigentuple modulus, i.e. the spectral radius of bcirc(t).
inline double spectral_radius(const Tensor3& t) {
  double rho = 0.0;
  for (const auto& tup : eigentuples(t).tuples) rho = std::max(rho, max_modulus(tup));
  return rho;
}

inline TEig t_eig(const Tensor3& t, const Tolerances& tol = {}) {
  detail::require_square(t, "t_eig");
  const auto blocks = dft_mode3(t);
  const std::size_t r = blocks.size();
  const Index n = t.rows();

  TEig out;
  out.u_blocks = {t.dims(), std::vector<CMatrix>(r), true};
  out.d_blocks = {t.dims(), std::vector<CMatrix>(r), true};
  out.tuples = {TupleKind::eigen, std::vector<CVector>(r)};
  const double cond_limit = 1.0 / tol.rank_factor(n, n);

  for (std::size_t k = 0; k <= r / 2; ++k) {
    const bool self_conj = detail::self_conjugate(k, r);
    auto be = detail::block_eig(blocks[k], self_conj, true);
    if (self_conj && !be.real) out.real_factors = false;
    out.tuples[k] = be.values;
    out.u_blocks[k] = be.vectors;
    out.d_blocks[k] = be.values.asDiagonal();
    const Vector sv = singular_values(be.vectors);
    if (!(sv(sv.size() - 1) * cond_limit > sv(0))) out.defective_blocks.push_back(k);
  }
  // Mirror blocks are the conjugates of their partners, which keeps the
  // assembled factors real; their tuples are re-sorted by the usual ordering.
  for (std::size_t k = r / 2 + 1; k < r; ++k) {
    out.u_blocks[k] = out.u_blocks[r - k].conjugate();
    out.d_blocks[k] = out.d_blocks[r - k].conjugate();
    out.tuples[k] = sort_eigenvalues(out.tuples[r - k].conjugate());
    if (std::find(out.defective_blocks.begin(), out.defective_blocks.end(), r - k) != out.defective_blocks.end()) {
      out.defective_blocks.push_back(k);
    }
  }
  std::sort(out.defective_blocks.begin(), out.defective_blocks.end());
  out.u_blocks.conjugate_symmetric = out.d_blocks.conjugate_symmetric = out.real_factors;

  IdftOptions lenient{false, std::nullopt};
  out.u = idft_mode3(out.u_blocks, lenient).tensor;
  out.d = idft_mode3(out.d_blocks, lenient).tensor;
  return out;
}

inline TSvd t_svd(const Tensor3& t) {
  const auto blocks = dft_mode3(t);
  const std::size_t r = blocks.size();
  const Index n = t.rows(), m = t.cols();
  FourierBlocks ub{{n, n, t.depth()}, std::vector<CMatrix>(r), true};
  FourierBlocks sb{t.dims(), std::vector<CMatrix>(r), true};
  FourierBlocks vb{{m, m, t.depth()}, std::vector<CMatrix>(r), true};
  TupleSet tuples{TupleKind::singular, std::vector<CVector>(r)};

  for (std::size_t k = 0; k <= r / 2; ++k) {
    Vector s;
    if (detail::self_conjugate(k, r)) {
      Eigen::BDCSVD<Matrix> svd(blocks[k].real(), Eigen::ComputeFullU | Eigen::ComputeFullV);
      ub[k] = svd.matrixU().cast<std::complex<double>>();
      vb[k] = svd.matrixV().cast<std::complex<double>>();
      s = svd.singularValues();
    } else {
      Eigen::BDCSVD<CMatrix> svd(blocks[k], Eigen::ComputeFullU | Eigen::ComputeFullV);
      ub[k] = svd.matrixU();
      vb[k] = svd.matrixV();
      s = svd.singularValues();
    }
    sb[k] = CMatrix::Zero(n, m);
    for (Index i = 0; i < s.size(); ++i) sb[k](i, i) = s(i);
    tuples.tuples[k] = s.cast<std::complex<double>>();
  }
  for (std::size_t k = r / 2 + 1; k < r; ++k) {
    ub[k] = ub[r - k].conjugate();
    sb[k] = sb[r - k];
    vb[k] = vb[r - k].conjugate();
    tuples.tuples[k] = tuples.tuples[r - k];
  }
  return {idft_mode3(ub).tensor, idft_mode3(sb).tensor, idft_mode3(vb).tensor, std::move(tuples)};
}

}  // namespace tpds
