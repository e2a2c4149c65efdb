#pragma once

// Dense decompositions used by the unfolding-based (bcirc) path and by the
// per-block kernels of the Fourier path.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "tpds/tensor3.hpp"

namespace tpds {

using CVector = Eigen::VectorXcd;
using Vector = Eigen::VectorXd;

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

/// Numerical tolerances shared by every rank, stability, and pencil test.
struct Tolerances {
  /// Relative rank tolerance; singular values at or below tol_rank * sigma_max
  /// count as zero. Unset means max(rows, cols) * machine epsilon.
  std::optional<double> rank;
  /// Stability margin: a spectral radius must be < 1 - stab.
  double stab = 1e-9;
  /// Accept radius <= 1 (the non-strict reading) instead of < 1 - stab.
  bool stab_inclusive = false;
  /// Relative threshold for rank drops of X1 - lambda X0, measured against
  /// ||X1|| + |lambda| ||X0|| (Frobenius norms of the bcirc forms).
  double pencil = 1e-8;

  double rank_factor(Index rows, Index cols) const {
    return rank.value_or(static_cast<double>(std::max(rows, cols)) * kEps);
  }
  bool is_stable(double radius) const { return stab_inclusive ? radius <= 1.0 : radius < 1.0 - stab; }
};

/// Singular values in descending order. Strongly rectangular inputs are first
/// reduced by a Householder QR, which leaves the singular values unchanged.
template <typename Derived>
Vector singular_values(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Index rows = a.rows(), cols = a.cols();
  if (rows == 0 || cols == 0) return Vector();
  const Index small = std::min(rows, cols), big = std::max(rows, cols);
  if (big >= 2 * small && small > 8) {
    Mat tall = rows >= cols ? Mat(a) : Mat(a.adjoint());
    Eigen::HouseholderQR<Mat> qr(tall);
    Mat r = qr.matrixQR().topRows(small).template triangularView<Eigen::Upper>();
    return Eigen::BDCSVD<Mat>(r).singularValues();
  }
  return Eigen::BDCSVD<Mat>(Mat(a)).singularValues();
}

/// Singular values of the full matrix by divide-and-conquer SVD, with no
/// preliminary QR. This is the reference kernel for the unfolded methods.
inline Vector dense_svd(const Matrix& a) { return Eigen::BDCSVD<Matrix>(a).singularValues(); }
inline Vector dense_svd(const CMatrix& a) { return Eigen::BDCSVD<CMatrix>(a).singularValues(); }

/// Number of singular values strictly above `threshold`.
inline Index count_above(const Vector& sv, double threshold) {
  Index k = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) ++k;
  }
  return k;
}

/// Numerical rank with threshold tol_rank * sigma_max.
template <typename Derived>
Index dense_rank(const Eigen::MatrixBase<Derived>& a, const Tolerances& tol = {}) {
  const Vector sv = singular_values(a);
  if (sv.size() == 0) return 0;
  return count_above(sv, tol.rank_factor(a.rows(), a.cols()) * sv(0));
}

/// Sorts by modulus descending, then argument ascending, then real part.
inline CVector sort_eigenvalues(CVector v) {
  std::vector<std::complex<double>> xs(v.data(), v.data() + v.size());
  std::sort(xs.begin(), xs.end(), [](const auto& a, const auto& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma > mb;
    const double aa = std::arg(a), ab = std::arg(b);
    if (aa != ab) return aa < ab;
    return a.real() < b.real();
  });
  for (Index i = 0; i < v.size(); ++i) v(i) = xs[static_cast<std::size_t>(i)];
  return v;
}

inline CVector dense_eig(const Matrix& a) {
  if (a.rows() != a.cols()) throw ShapeMismatch("eigenvalues need a square matrix");
  if (a.rows() == 0) return CVector();
  return sort_eigenvalues(Eigen::EigenSolver<Matrix>(a, false).eigenvalues());
}

inline CVector dense_eig(const CMatrix& a) {
  if (a.rows() != a.cols()) throw ShapeMismatch("eigenvalues need a square matrix");
  if (a.rows() == 0) return CVector();
  return sort_eigenvalues(Eigen::ComplexEigenSolver<CMatrix>(a, false).eigenvalues());
}

inline double max_modulus(const CVector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

/// Moore-Penrose pseudoinverse; singular values at or below `threshold`
/// (absolute) are treated as zero.
template <typename Derived>
auto pinv(const Eigen::MatrixBase<Derived>& a, double threshold) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::BDCSVD<Mat> svd(Mat(a), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Mat out = Mat::Zero(a.cols(), a.rows());
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > threshold) out.noalias() += (svd.matrixV().col(i) / s(i)) * svd.matrixU().col(i).adjoint();
  }
  return out;
}

/// Pseudoinverse with the default relative threshold tol_rank * sigma_max.
template <typename Derived>
auto pinv(const Eigen::MatrixBase<Derived>& a, const Tolerances& tol = {}) {
  const Vector sv = singular_values(a);
  const double smax = sv.size() ? sv(0) : 0.0;
  return pinv(a, tol.rank_factor(a.rows(), a.cols()) * smax);
}

}  // namespace tpds
