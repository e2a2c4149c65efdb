#pragma once

// Dense real third-order tensors and the block-circulant unfoldings that
// define the T-product algebra.
//
// Storage is frontal-slice-major: slice k occupies the contiguous range
// [k*n*m, (k+1)*n*m), and inside a slice entries are column-major, so the
// element (i, j, k) lives at offset k*n*m + j*n + i. Every slice can be viewed
// in place as an Eigen matrix.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tpds/errors.hpp"

namespace tpds {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;

struct Dims {
  Index n = 0;
  Index m = 0;
  Index r = 0;
  friend bool operator==(const Dims&, const Dims&) = default;
};

inline std::string to_string(const Dims& d) {
  return std::to_string(d.n) + "x" + std::to_string(d.m) + "x" + std::to_string(d.r);
}

class Tensor3 {
 public:
  using SliceMap = Eigen::Map<Matrix>;
  using ConstSliceMap = Eigen::Map<const Matrix>;

  Tensor3() = default;

  /// Zero tensor of shape n x m x r.
  Tensor3(Index n, Index m, Index r) : n_(n), m_(m), r_(r) {
    if (n < 1 || m < 1 || r < 1) {
      throw ShapeMismatch("tensor dimensions must be positive, got " + to_string(Dims{n, m, r}));
    }
    data_.assign(static_cast<std::size_t>(n * m * r), 0.0);
  }
  explicit Tensor3(Dims d) : Tensor3(d.n, d.m, d.r) {}

  Tensor3(Index n, Index m, Index r, std::vector<double> data) : n_(n), m_(m), r_(r) {
    if (n < 1 || m < 1 || r < 1) {
      throw ShapeMismatch("tensor dimensions must be positive, got " + to_string(Dims{n, m, r}));
    }
    if (data.size() != static_cast<std::size_t>(n * m * r)) {
      throw ShapeMismatch("tensor data length does not match " + to_string(Dims{n, m, r}));
    }
    data_ = std::move(data);
  }

  static Tensor3 from_slices(std::span<const Matrix> slices) {
    if (slices.empty()) throw ShapeMismatch("at least one frontal slice is required");
    Tensor3 t(slices[0].rows(), slices[0].cols(), static_cast<Index>(slices.size()));
    for (Index k = 0; k < t.r_; ++k) {
      const auto& s = slices[static_cast<std::size_t>(k)];
      if (s.rows() != t.n_ || s.cols() != t.m_) throw ShapeMismatch("frontal slices differ in shape");
      t.slice(k) = s;
    }
    return t;
  }

  Index rows() const { return n_; }
  Index cols() const { return m_; }
  Index depth() const { return r_; }
  Dims dims() const { return {n_, m_, r_}; }
  bool empty() const { return data_.empty(); }

  double& operator()(Index i, Index j, Index k) { return data_[offset(i, j, k)]; }
  double operator()(Index i, Index j, Index k) const { return data_[offset(i, j, k)]; }

  SliceMap slice(Index k) { return SliceMap(data_.data() + k * n_ * m_, n_, m_); }
  ConstSliceMap slice(Index k) const { return ConstSliceMap(data_.data() + k * n_ * m_, n_, m_); }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  double max_abs() const {
    double v = 0.0;
    for (double x : data_) v = std::max(v, std::abs(x));
    return v;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
  }

  Tensor3& operator+=(const Tensor3& o) {
    require_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Tensor3& operator-=(const Tensor3& o) {
    require_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Tensor3& operator*=(double c) {
    for (double& x : data_) x *= c;
    return *this;
  }

  friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
  friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
  friend Tensor3 operator*(Tensor3 a, double c) { return a *= c; }
  friend Tensor3 operator*(double c, Tensor3 a) { return a *= c; }

  friend bool operator==(const Tensor3& a, const Tensor3& b) {
    return a.dims() == b.dims() && a.data_ == b.data_;
  }

 private:
  std::size_t offset(Index i, Index j, Index k) const {
    return static_cast<std::size_t>(k * n_ * m_ + j * n_ + i);
  }
  void require_same(const Tensor3& o) const {
    if (dims() != o.dims()) {
      throw DimensionMismatch("tensor shapes differ: " + to_string(dims()) + " vs " + to_string(o.dims()));
    }
  }

  Index n_ = 0;
  Index m_ = 0;
  Index r_ = 0;
  std::vector<double> data_;
};

/// Largest entrywise absolute difference between two same-shape tensors.
inline double max_abs_diff(const Tensor3& a, const Tensor3& b) {
  if (a.dims() != b.dims()) throw DimensionMismatch("tensor shapes differ");
  double v = 0.0;
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) v = std::max(v, std::abs(x[i] - y[i]));
  return v;
}

/// Block-circulant matrix: block (i, j) is slice (i - j) mod r.
inline Matrix bcirc(const Tensor3& t) {
  const Index n = t.rows(), m = t.cols(), r = t.depth();
  Matrix out(n * r, m * r);
  for (Index bj = 0; bj < r; ++bj) {
    for (Index bi = 0; bi < r; ++bi) {
      out.block(bi * n, bj * m, n, m) = t.slice((bi - bj + r) % r);
    }
  }
  return out;
}

/// Stacks the frontal slices vertically, slice 0 on top.
inline Matrix unfold(const Tensor3& t) {
  const Index n = t.rows(), m = t.cols(), r = t.depth();
  Matrix out(n * r, m);
  for (Index k = 0; k < r; ++k) out.middleRows(k * n, n) = t.slice(k);
  return out;
}

inline Tensor3 fold(const Matrix& mat, Dims dims) {
  if (mat.rows() != dims.n * dims.r || mat.cols() != dims.m) {
    throw ShapeMismatch("fold expects a " + std::to_string(dims.n * dims.r) + "x" + std::to_string(dims.m) +
                        " matrix, got " + std::to_string(mat.rows()) + "x" + std::to_string(mat.cols()));
  }
  Tensor3 t(dims);
  for (Index k = 0; k < dims.r; ++k) t.slice(k) = mat.middleRows(k * dims.n, dims.n);
  return t;
}

/// Largest deviation of `mat` from the block-circulant pattern set by its
/// first block column.
inline double circulant_deviation(const Matrix& mat, Dims dims) {
  const Index n = dims.n, m = dims.m, r = dims.r;
  double dev = 0.0;
  for (Index bj = 1; bj < r; ++bj) {
    for (Index bi = 0; bi < r; ++bi) {
      const Index src = (bi - bj + r) % r;
      dev = std::max(dev, (mat.block(bi * n, bj * m, n, m) - mat.block(src * n, 0, n, m)).cwiseAbs().maxCoeff());
    }
  }
  return dev;
}

struct UnBcirc {
  Tensor3 tensor;
  double max_deviation = 0.0;
};

/// Inverse of bcirc. The first block column gives the slices; the rest of the
/// matrix must match the circulant pattern to within `tol`, which defaults to
/// 1e-9 times the largest absolute entry.
inline UnBcirc un_bcirc(const Matrix& mat, Dims dims, std::optional<double> tol = std::nullopt) {
  if (dims.n < 1 || dims.m < 1 || dims.r < 1 || mat.rows() != dims.n * dims.r || mat.cols() != dims.m * dims.r) {
    throw ShapeMismatch("un_bcirc expects a " + std::to_string(dims.n * dims.r) + "x" +
                        std::to_string(dims.m * dims.r) + " matrix");
  }
  const double dev = circulant_deviation(mat, dims);
  const double limit = tol.value_or(1e-9 * mat.cwiseAbs().maxCoeff());
  if (dev > limit) throw NotCirculant(dev);
  return {fold(mat.leftCols(dims.m), dims), dev};
}

inline Tensor3 t_identity(Index n, Index r) {
  Tensor3 t(n, n, r);
  t.slice(0).setIdentity();
  return t;
}

/// Transposes every slice and reverses the order of slices 1..r-1.
inline Tensor3 t_transpose(const Tensor3& t) {
  const Index r = t.depth();
  Tensor3 out(t.cols(), t.rows(), r);
  out.slice(0) = t.slice(0).transpose();
  for (Index k = 1; k < r; ++k) out.slice(k) = t.slice(r - k).transpose();
  return out;
}

/// True when every frontal slice is diagonal to within `tol`.
inline bool is_t_diagonal(const Tensor3& t, double tol) {
  for (Index k = 0; k < t.depth(); ++k) {
    auto s = t.slice(k);
    for (Index j = 0; j < s.cols(); ++j) {
      for (Index i = 0; i < s.rows(); ++i) {
        if (i != j && std::abs(s(i, j)) > tol) return false;
      }
    }
  }
  return true;
}

/// Concatenates tensors along the second mode.
inline Tensor3 concat_cols(std::span<const Tensor3> parts) {
  if (parts.empty()) throw ShapeMismatch("nothing to concatenate");
  const Index n = parts[0].rows(), r = parts[0].depth();
  Index m = 0;
  for (const auto& p : parts) {
    if (p.rows() != n || p.depth() != r) throw DimensionMismatch("concat_cols: first/third modes differ");
    m += p.cols();
  }
  Tensor3 out(n, m, r);
  for (Index k = 0; k < r; ++k) {
    Index col = 0;
    for (const auto& p : parts) {
      out.slice(k).middleCols(col, p.cols()) = p.slice(k);
      col += p.cols();
    }
  }
  return out;
}

}  // namespace tpds
