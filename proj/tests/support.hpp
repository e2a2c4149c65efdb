#pragma once

// Shared oracles for the test suites: dense reference computations that do
// not go through the Fourier path.

#include <algorithm>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "tpds/tpds.hpp"

namespace tpds::test {

/// Largest distance in a greedy nearest-neighbour pairing of two multisets.
/// Returns +inf when the sizes differ.
inline double multiset_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const auto& x : a) {
    std::size_t best = b.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(x - b[j]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_d);
  }
  return worst;
}

inline std::vector<std::complex<double>> to_vector(const CVector& v) { return {v.data(), v.data() + v.size()}; }

inline std::vector<std::complex<double>> to_vector(const Vector& v) {
  std::vector<std::complex<double>> out;
  for (Index i = 0; i < v.size(); ++i) out.emplace_back(v(i), 0.0);
  return out;
}

/// Eigenvalues of a dense real matrix, straight from Eigen.
inline std::vector<std::complex<double>> oracle_eig(const Matrix& m) {
  return to_vector(CVector(Eigen::EigenSolver<Matrix>(m, false).eigenvalues()));
}

/// Singular values of a dense real matrix via Jacobi SVD.
inline std::vector<std::complex<double>> oracle_svd(const Matrix& m) {
  return to_vector(Vector(Eigen::JacobiSVD<Matrix>(m).singularValues()));
}

inline Index oracle_rank(const Matrix& m, double rel) {
  const Vector s = Eigen::JacobiSVD<Matrix>(m).singularValues();
  if (s.size() == 0) return 0;
  return (s.array() > rel * s(0)).count();
}

/// Unitary DFT matrix of size r with omega = exp(-2 pi i / r).
inline CMatrix dft_matrix(Index r) {
  const double pi = std::acos(-1.0);
  CMatrix f(r, r);
  for (Index a = 0; a < r; ++a) {
    for (Index b = 0; b < r; ++b) f(a, b) = std::polar(1.0 / std::sqrt(double(r)), -2.0 * pi * double(a * b) / double(r));
  }
  return f;
}

/// Kronecker product F (x) I_n.
inline CMatrix kron_identity(const CMatrix& f, Index n) {
  CMatrix out = CMatrix::Zero(f.rows() * n, f.cols() * n);
  for (Index a = 0; a < f.rows(); ++a) {
    for (Index b = 0; b < f.cols(); ++b) out.block(a * n, b * n, n, n) = f(a, b) * CMatrix::Identity(n, n);
  }
  return out;
}

/// Dense Moore-Penrose inverse through Jacobi SVD.
inline Matrix oracle_pinv(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double cut = std::max(a.rows(), a.cols()) * kEps * (s.size() ? s(0) : 0.0);
  Vector inv = s;
  for (Index i = 0; i < s.size(); ++i) inv(i) = s(i) > cut ? 1.0 / s(i) : 0.0;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

/// Random tensor with the given shape drawn from a per-case seed.
inline Tensor3 rand3(Index n, Index m, Index r, std::uint64_t seed) { return random_tensor(n, m, r, seed); }

}  // namespace tpds::test
