#include <gtest/gtest.h>

#include "support.hpp"

namespace tpds {
namespace {

using test::rand3;

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

Tensor3 tensor_of(std::vector<Matrix> slices) { return Tensor3::from_slices(slices); }

TEST(Tensor3Test, StorageIsSliceMajor) {
  Tensor3 t(2, 3, 2);
  t(1, 2, 1) = 5.0;
  EXPECT_EQ(t.data()[1 * 6 + 2 * 2 + 1], 5.0);
  EXPECT_EQ(t.slice(1)(1, 2), 5.0);
  EXPECT_EQ(t.dims(), (Dims{2, 3, 2}));
}

TEST(Tensor3Test, RejectsBadConstruction) {
  EXPECT_THROW(Tensor3(0, 1, 1), ShapeMismatch);
  EXPECT_THROW(Tensor3(1, 2, 2, std::vector<double>(3)), ShapeMismatch);
}

TEST(BcircTest, SingleSliceIsTheMatrix) {
  const Matrix a = mat({{1, 2}, {3, 4}, {5, 6}});
  EXPECT_EQ(bcirc(tensor_of({a})), a);
}

TEST(BcircTest, TwoSlices) {
  const Matrix t1 = mat({{1, 2}}), t2 = mat({{3, 4}});
  const Matrix expected = mat({{1, 2, 3, 4}, {3, 4, 1, 2}});
  EXPECT_EQ(bcirc(tensor_of({t1, t2})), expected);
}

TEST(BcircTest, ThreeSlicesFollowCirculantPattern) {
  // Block columns: (T1,T2,T3), (T3,T1,T2), (T2,T3,T1).
  const Matrix t1 = mat({{1}}), t2 = mat({{2}}), t3 = mat({{3}});
  const Matrix expected = mat({{1, 3, 2}, {2, 1, 3}, {3, 2, 1}});
  EXPECT_EQ(bcirc(tensor_of({t1, t2, t3})), expected);
}

TEST(BcircTest, IdentityMapsToIdentity) {
  EXPECT_EQ(bcirc(t_identity(3, 4)), Matrix::Identity(12, 12));
  const auto id = t_identity(2, 3);
  EXPECT_EQ(id.slice(0), Matrix::Identity(2, 2));
  EXPECT_TRUE(id.slice(1).isZero());
  EXPECT_TRUE(id.slice(2).isZero());
}

TEST(FoldTest, RoundTripIsExact) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Index n = 1 + s % 4, m = 1 + (s / 4) % 5, r = 1 + (s / 3) % 6;
    const auto x = rand3(n, m, r, s);
    EXPECT_EQ(fold(unfold(x), x.dims()), x);
  }
}

TEST(FoldTest, SingleSliceUnfoldIsIdentity) {
  const auto x = rand3(3, 2, 1, 4);
  EXPECT_EQ(unfold(x), Matrix(x.slice(0)));
}

TEST(FoldTest, RejectsWrongShape) {
  EXPECT_THROW(fold(Matrix::Zero(5, 2), Dims{2, 2, 2}), ShapeMismatch);
}

TEST(UnBcircTest, RoundTripIsExact) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto x = rand3(2, 3, 1 + s % 5, s);
    const auto back = un_bcirc(bcirc(x), x.dims());
    EXPECT_EQ(back.tensor, x);
    EXPECT_EQ(back.max_deviation, 0.0);
  }
}

TEST(UnBcircTest, DetectsNonCirculantEntry) {
  const auto x = rand3(2, 2, 3, 9);
  Matrix b = bcirc(x);
  b(2, 0) += 1.0;  // block (1,0) no longer equals block (2,1)
  try {
    un_bcirc(b, x.dims());
    FAIL() << "expected NotCirculant";
  } catch (const NotCirculant& e) {
    EXPECT_NEAR(e.max_deviation, 1.0, 1e-12);
  }
}

TEST(UnBcircTest, RejectsShape) { EXPECT_THROW(un_bcirc(Matrix::Zero(4, 5), Dims{2, 2, 2}), ShapeMismatch); }

TEST(UnBcircTest, ProductOfCirculantsIsCirculant) {
  const auto a = rand3(3, 2, 4, 1), b = rand3(2, 3, 4, 2);
  const auto c = un_bcirc(bcirc(a) * bcirc(b), {3, 3, 4});
  EXPECT_LT(max_abs_diff(c.tensor, t_product(a, b)), 1e-12);
}

TEST(TProductTest, RejectsMismatchedModes) {
  EXPECT_THROW(t_product(rand3(2, 3, 4, 1), rand3(2, 3, 4, 2)), DimensionMismatch);
  EXPECT_THROW(t_product(rand3(2, 3, 4, 1), rand3(3, 3, 5, 2)), DimensionMismatch);
}

TEST(TProductTest, DepthOneIsMatrixProduct) {
  const auto a = rand3(3, 4, 1, 1), b = rand3(4, 2, 1, 2);
  const Matrix expected = a.slice(0) * b.slice(0);
  for (auto path : {ProductPath::literal, ProductPath::fourier}) {
    EXPECT_LT(test::max_abs(Matrix(t_product(a, b, path).slice(0)) - expected), 1e-14);
  }
}

TEST(TProductTest, MatchesLiteralDefinition) {
  const auto a = rand3(3, 3, 4, 11), b = rand3(3, 2, 4, 12);
  const Tensor3 oracle = fold(bcirc(a) * unfold(b), {3, 2, 4});
  EXPECT_LT(max_abs_diff(t_product(a, b), oracle), 1e-13);
}

TEST(TProductTest, FourierPathMatchesLiteral) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto a = rand3(4, 3, 5, 100 + s), b = rand3(3, 2, 5, 200 + s);
    const Tensor3 oracle = fold(bcirc(a) * unfold(b), {4, 2, 5});
    const auto f = t_product(a, b, ProductPath::fourier);
    EXPECT_LT(max_abs_diff(f, oracle), 1e-12 * oracle.max_abs());
  }
}

TEST(TProductTest, IdentityIsTwoSidedUnit) {
  for (Index r : {1, 2, 3, 4, 7, 8}) {
    const auto b = rand3(3, 2, r, 30 + r);
    EXPECT_LT(max_abs_diff(t_product(t_identity(3, r), b), b), 1e-14);
    EXPECT_LT(max_abs_diff(t_product(b, t_identity(2, r)), b), 1e-14);
  }
}

TEST(TProductTest, HomomorphismOnRandomShapes) {
  std::mt19937_64 gen(4);
  std::uniform_int_distribution<Index> dim(1, 6);
  for (int c = 0; c < 200; ++c) {
    const Index n = dim(gen), m = dim(gen), p = dim(gen), r = dim(gen);
    const auto a = rand3(n, m, r, 1000 + c), b = rand3(m, p, r, 5000 + c);
    const Matrix lhs = bcirc(t_product(a, b));
    const Matrix rhs = bcirc(a) * bcirc(b);
    EXPECT_LE(test::max_abs(lhs - rhs), 1e-10 * std::max(1.0, test::max_abs(rhs)))
        << "case " << c << " dims " << n << "," << m << "," << p << "," << r;
  }
}

TEST(TProductTest, Associativity) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Index r = 1 + s % 6;
    const auto a = rand3(2, 3, r, s), b = rand3(3, 4, r, s + 100), c = rand3(4, 2, r, s + 200);
    const auto left = t_product(t_product(a, b), c), right = t_product(a, t_product(b, c));
    EXPECT_LT(max_abs_diff(left, right), 1e-9 * std::max(1.0, left.max_abs()));
  }
}

TEST(TransposeTest, DepthOneIsMatrixTranspose) {
  const auto x = rand3(2, 3, 1, 3);
  EXPECT_EQ(Matrix(t_transpose(x).slice(0)), Matrix(x.slice(0).transpose()));
}

TEST(TransposeTest, BcircOfTransposeIsTransposeOfBcirc) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto x = rand3(1 + s % 3, 1 + s % 4, 1 + s % 6, s);
    EXPECT_EQ(bcirc(t_transpose(x)), Matrix(bcirc(x).transpose()));
    EXPECT_EQ(t_transpose(t_transpose(x)), x);
  }
}

TEST(TransposeTest, ReversesProductOrder) {
  const auto a = rand3(2, 3, 5, 1), b = rand3(3, 4, 5, 2);
  EXPECT_LT(max_abs_diff(t_transpose(t_product(a, b)), t_product(t_transpose(b), t_transpose(a))), 1e-12);
}

TEST(InverseTest, IdentityIsSelfInverse) {
  EXPECT_LT(max_abs_diff(t_inverse(t_identity(3, 4)), t_identity(3, 4)), 1e-15);
}

TEST(InverseTest, ScalarTubeByHand) {
  // Tube (0.5, 0.1): Fourier values 0.6 and 0.4, inverse values 1/0.6 and
  // 1/0.4, back-transformed: ((1/0.6 + 1/0.4)/2, (1/0.6 - 1/0.4)/2).
  const Tensor3 t(1, 1, 2, {0.5, 0.1});
  const auto inv = t_inverse(t);
  EXPECT_NEAR(inv(0, 0, 0), (1 / 0.6 + 1 / 0.4) / 2, 1e-14);
  EXPECT_NEAR(inv(0, 0, 1), (1 / 0.6 - 1 / 0.4) / 2, 1e-14);
  EXPECT_LT(max_abs_diff(t_product(t, inv), t_identity(1, 2)), 1e-14);
}

TEST(InverseTest, ZeroSumTubeIsSingularAtDc) {
  const Tensor3 t(1, 1, 2, {1.0, -1.0});
  try {
    t_inverse(t);
    FAIL() << "expected Singular";
  } catch (const Singular& e) {
    EXPECT_EQ(e.block_index, 0u);
    EXPECT_EQ(e.min_singular_value, 0.0);
  }
}

TEST(InverseTest, RandomTensorsInvertBothSides) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Index r = 1 + s % 7;
    const auto t = rand3(3, 3, r, 50 + s);
    const auto inv = t_inverse(t);
    EXPECT_LT(max_abs_diff(t_product(t, inv), t_identity(3, r)), 1e-8);
    EXPECT_LT(max_abs_diff(t_product(inv, t), t_identity(3, r)), 1e-8);
    EXPECT_LT(test::max_abs(bcirc(inv) - bcirc(t).inverse()), 1e-8 * test::max_abs(bcirc(inv)));
  }
}

TEST(InverseTest, RejectsRectangular) { EXPECT_THROW(t_inverse(rand3(2, 3, 2, 1)), ShapeMismatch); }

TEST(RightPinvTest, IdentityPinvIsIdentity) {
  EXPECT_LT(max_abs_diff(t_right_pinv(t_identity(2, 5)), t_identity(2, 5)), 1e-15);
}

TEST(RightPinvTest, WideFullRankGivesRightInverse) {
  const auto x = rand3(2, 20, 4, 77);
  EXPECT_LT(max_abs_diff(t_product(x, t_right_pinv(x)), t_identity(2, 4)), 1e-8);
}

TEST(RightPinvTest, MatchesDensePseudoinverse) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Index r = 1 + s % 8;
    const auto x = rand3(2, 5, r, 300 + s);
    const auto res = t_right_pinv_detail(x);
    const Matrix oracle = test::oracle_pinv(bcirc(x));
    EXPECT_LT(test::max_abs(bcirc(res.tensor) - oracle), 1e-8 * std::max(1.0, test::max_abs(oracle)));
    EXPECT_LT(res.max_imag, 1e-10);
    for (Index k : res.ranks) EXPECT_EQ(k, 2);
  }
}

TEST(RightPinvTest, RankDeficientReportsBlockRanks) {
  // Equal slices: the odd-frequency block vanishes.
  const auto base = rand3(2, 4, 1, 5);
  Tensor3 x(2, 4, 2);
  x.slice(0) = base.slice(0);
  x.slice(1) = base.slice(0);
  const auto res = t_right_pinv_detail(x);
  EXPECT_EQ(res.ranks, (std::vector<Index>{2, 0}));
  EXPECT_LT(test::max_abs(bcirc(res.tensor) - test::oracle_pinv(bcirc(x))), 1e-10);
}

TEST(OrthogonalTest, Cases) {
  EXPECT_TRUE(is_t_orthogonal(t_identity(3, 4), 1e-12));
  EXPECT_FALSE(is_t_orthogonal(2.0 * t_identity(3, 4), 1e-8));
  EXPECT_TRUE(is_t_orthogonal(t_svd(rand3(3, 3, 5, 8)).u, 1e-8));
  EXPECT_FALSE(is_t_orthogonal(rand3(2, 3, 2, 1), 1e-8));
}

TEST(TDiagonalTest, DetectsOffDiagonal) {
  Tensor3 t = t_identity(2, 3);
  EXPECT_TRUE(is_t_diagonal(t, 0.0));
  t(0, 1, 2) = 1e-3;
  EXPECT_FALSE(is_t_diagonal(t, 1e-6));
}

TEST(ConcatTest, JoinsAlongColumns) {
  const auto a = rand3(2, 1, 3, 1), b = rand3(2, 2, 3, 2);
  const std::vector<Tensor3> parts{a, b};
  const auto c = concat_cols(parts);
  EXPECT_EQ(c.dims(), (Dims{2, 3, 3}));
  EXPECT_EQ(c(1, 0, 2), a(1, 0, 2));
  EXPECT_EQ(c(1, 2, 2), b(1, 1, 2));
}

}  // namespace
}  // namespace tpds
