#pragma once

// Data-informativity tests for T-product dynamical systems.
//
// Every test exists in two forms that must agree:
//  - Method::fourier works on the r Fourier blocks of the data tensors
//    (n x lh each), costing O(r) block operations plus the transforms;
//  - Method::dense works on the block-circulant matrices bcirc(X0), bcirc(X1)
//    (nr x lhr), costing O(r^3).
//
// Rank thresholds are absolute and computed from quantities that both forms
// share (sigma_max(bcirc(X0)) = max over blocks of sigma_max, and
// ||bcirc(X)||_F = sqrt(r) ||X||_F), so the per-block ranks sum to the dense
// rank up to rounding.

#include <chrono>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "tpds/datagen.hpp"
#include "tpds/decomp.hpp"
#include "tpds/detail/parallel.hpp"
#include "tpds/fourier.hpp"
#include "tpds/linalg.hpp"
#include "tpds/tproduct.hpp"

namespace tpds {

enum class TestKind { sysid, stability, controllability, stabilizability };
enum class Method { fourier, dense };

inline const char* to_string(TestKind k) {
  switch (k) {
    case TestKind::sysid: return "sysid";
    case TestKind::stability: return "stability";
    case TestKind::controllability: return "controllability";
    case TestKind::stabilizability: return "stabilizability";
  }
  return "?";
}

inline const char* to_string(Method m) { return m == Method::fourier ? "fourier" : "dense"; }

struct InformativityOptions {
  Tolerances tol;
  /// Seeds the random shifts and compressions of the pencil tests.
  std::uint64_t seed = 20240917;
  /// Worker threads for per-block work (Fourier method only).
  int threads = 1;
};

struct BlockInfo {
  std::size_t index = 0;
  Index rank = 0;
  std::optional<double> radius;
};

/// A root of det((X1 - lambda X0) W) examined by a pencil test.
struct Candidate {
  std::complex<double> lambda;
  Index rank = 0;
  /// Fourier block the candidate came from; unset for the dense method.
  std::optional<std::size_t> block;
  bool deficient = false;
  /// Inside the stability region, so ignored by the stabilizability test.
  bool exempt = false;
};

struct InformativityReport {
  TestKind test = TestKind::sysid;
  Method method = Method::fourier;
  bool verdict = false;
  Dims dims;               ///< shape of X0 (n x lh x r)
  Index required_rank = 0; ///< n per block (fourier) or nr (dense)
  Index total_rank = 0;    ///< sum of block ranks, or the dense rank
  std::vector<BlockInfo> per_block;  ///< one entry per Fourier block (fourier method)
  std::optional<double> max_radius;
  bool generic_deficient = false;
  std::vector<Candidate> candidates;
  double rank_threshold = 0.0;  ///< absolute singular-value cutoff used
  Tolerances tol;
  std::uint64_t seed = 0;
  double seconds = 0.0;
};

namespace detail {

inline void require_data_shapes(const Tensor3& x0, const Tensor3* x1, const Tensor3* u0) {
  if (x0.empty()) throw ShapeMismatch("X0 is empty");
  if (x1 && x1->dims() != x0.dims()) {
    throw ShapeMismatch("X1 " + to_string(x1->dims()) + " must have the shape of X0 " + to_string(x0.dims()));
  }
  if (u0 && (u0->cols() != x0.cols() || u0->depth() != x0.depth())) {
    throw ShapeMismatch("U0 " + to_string(u0->dims()) + " does not match X0 " + to_string(x0.dims()));
  }
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct RankStage {
  std::vector<Index> ranks;
  std::vector<Vector> singular_values;
  double threshold = 0.0;
  bool full = false;
};

inline RankStage block_rank_stage(const FourierBlocks& x0b, const Tolerances& tol, int threads) {
  const Dims d = x0b.dims;
  RankStage st;
  st.singular_values.resize(x0b.size());
  parallel_for(x0b.size(), threads, [&](std::size_t k) { st.singular_values[k] = singular_values(x0b[k]); });
  double smax = 0.0;
  for (const auto& sv : st.singular_values) {
    if (sv.size()) smax = std::max(smax, sv(0));
  }
  st.threshold = bcirc_rank_threshold(d, smax, tol);
  st.full = true;
  for (const auto& sv : st.singular_values) {
    st.ranks.push_back(count_above(sv, st.threshold));
    if (st.ranks.back() < d.n) st.full = false;
  }
  return st;
}

}  // namespace detail

/// Result of identify: the minimum-norm solution of X1 = A * X0.
struct Identification {
  Tensor3 a;
  double residual = 0.0;  ///< max-abs of X1 - A * X0
  bool unique = false;    ///< bcirc(X0) has full row rank
  std::vector<Index> ranks;
  double rank_threshold = 0.0;
};

inline Identification identify(const Tensor3& x0, const Tensor3& x1, const Tolerances& tol = {}) {
  detail::require_data_shapes(x0, &x1, nullptr);
  auto pinv = t_right_pinv_detail(x0, tol);
  Identification out;
  out.a = t_product(x1, pinv.tensor);
  out.residual = max_abs_diff(x1, t_product(out.a, x0));
  out.ranks = std::move(pinv.ranks);
  out.rank_threshold = pinv.threshold;
  out.unique = true;
  for (Index k : out.ranks) out.unique = out.unique && k == x0.rows();
  return out;
}

inline InformativityReport informative_sysid(const Tensor3& x0, Method method, const InformativityOptions& opt = {}) {
  detail::require_data_shapes(x0, nullptr, nullptr);
  detail::Stopwatch clock;
  InformativityReport rep;
  rep.test = TestKind::sysid;
  rep.method = method;
  rep.dims = x0.dims();
  rep.tol = opt.tol;
  rep.seed = opt.seed;
  const Dims d = x0.dims();
  if (method == Method::fourier) {
    const auto st = detail::block_rank_stage(dft_mode3(x0), opt.tol, opt.threads);
    rep.required_rank = d.n;
    rep.rank_threshold = st.threshold;
    for (std::size_t k = 0; k < st.ranks.size(); ++k) {
      rep.per_block.push_back({k, st.ranks[k], std::nullopt});
      rep.total_rank += st.ranks[k];
    }
    rep.verdict = st.full;
  } else {
    const Vector sv = dense_svd(bcirc(x0));
    rep.required_rank = d.n * d.r;
    rep.rank_threshold = opt.tol.rank_factor(d.n * d.r, d.m * d.r) * (sv.size() ? sv(0) : 0.0);
    rep.total_rank = count_above(sv, rep.rank_threshold);
    rep.verdict = rep.total_rank == rep.required_rank;
  }
  rep.seconds = clock.seconds();
  return rep;
}

inline InformativityReport informative_stability(const Tensor3& x0, const Tensor3& x1, Method method,
                                                 const InformativityOptions& opt = {}) {
  detail::require_data_shapes(x0, &x1, nullptr);
  detail::Stopwatch clock;
  InformativityReport rep;
  rep.test = TestKind::stability;
  rep.method = method;
  rep.dims = x0.dims();
  rep.tol = opt.tol;
  rep.seed = opt.seed;
  const Dims d = x0.dims();
  const std::size_t r = static_cast<std::size_t>(d.r);

  if (method == Method::fourier) {
    const auto x0b = dft_mode3(x0);
    const auto x1b = dft_mode3(x1);
    const auto st = detail::block_rank_stage(x0b, opt.tol, opt.threads);
    rep.required_rank = d.n;
    rep.rank_threshold = st.threshold;
    rep.per_block.resize(r);
    for (std::size_t k = 0; k < r; ++k) {
      rep.per_block[k] = {k, st.ranks[k], std::nullopt};
      rep.total_rank += st.ranks[k];
    }
    if (st.full) {
      // Blocks of X1 * pinv(X0); blocks r-k are conjugates of blocks k and
      // share their spectral radius.
      std::vector<double> radius(r, 0.0);
      detail::parallel_for(r / 2 + 1, opt.threads, [&](std::size_t k) {
        const CMatrix a = x1b[k] * pinv(x0b[k], st.threshold);
        radius[k] = max_modulus(Eigen::ComplexEigenSolver<CMatrix>(a, false).eigenvalues());
      });
      double rho = 0.0;
      for (std::size_t k = 0; k < r; ++k) {
        const double v = k <= r / 2 ? radius[k] : radius[r - k];
        rep.per_block[k].radius = v;
        rho = std::max(rho, v);
      }
      rep.max_radius = rho;
      rep.verdict = opt.tol.is_stable(rho);
    }
  } else {
    rep.required_rank = d.n * d.r;
    const Matrix b0 = bcirc(x0);
    const Index rows = b0.rows(), cols = b0.cols();
    if (cols < rows) {
      const Vector sv = singular_values(b0);
      rep.rank_threshold = opt.tol.rank_factor(rows, cols) * (sv.size() ? sv(0) : 0.0);
      rep.total_rank = count_above(sv, rep.rank_threshold);
    } else {
      // bcirc(X0)^T = Q R; the singular values of R are those of bcirc(X0),
      // and for full row rank, bcirc(X1) pinv(bcirc(X0)) = (R^-1 Q1^T bcirc(X1)^T)^T.
      Eigen::HouseholderQR<Matrix> qr(b0.transpose());
      const Matrix rfac = qr.matrixQR().topRows(rows).triangularView<Eigen::Upper>();
      const Vector sv = Eigen::BDCSVD<Matrix>(rfac).singularValues();
      rep.rank_threshold = opt.tol.rank_factor(rows, cols) * (sv.size() ? sv(0) : 0.0);
      rep.total_rank = count_above(sv, rep.rank_threshold);
      if (rep.total_rank == rows) {
        Matrix y = bcirc(x1).transpose();
        y.applyOnTheLeft(qr.householderQ().adjoint());
        const Matrix at = rfac.triangularView<Eigen::Upper>().solve(y.topRows(rows));
        rep.max_radius = max_modulus(dense_eig(Matrix(at.transpose())));
        rep.verdict = opt.tol.is_stable(*rep.max_radius);
      }
    }
  }
  rep.seconds = clock.seconds();
  return rep;
}

namespace detail {

// Rank test of the pencil P1 - lambda P0 over all complex lambda.
//
// (1) The rank at a generic point is found at two random shifts; if both are
//     deficient the pencil is rank deficient everywhere.
// (2) Otherwise the rank can only drop at roots of p(lambda) = det((P1 -
//     lambda P0) W) for a random compression W. These are the finite
//     eigenvalues of the square pencil (P1 W, P0 W), obtained after a shift
//     sigma as lambda = sigma + 1/mu with mu an eigenvalue of
//     ((P1 - sigma P0) W)^-1 P0 W.
// (3) Each distinct root is refined and checked with an SVD of the full pencil.
struct PencilContext {
  double x1_norm = 0.0;  // ||bcirc(X1)||_F
  double x0_norm = 0.0;  // ||bcirc(X0)||_F
  double rho = 1.0;      // natural modulus scale of the roots
  std::complex<double> shifts[2];
  double tol = 1e-8;
  std::uint64_t seed = 0;
  bool intersect_draws = false;

  double threshold(std::complex<double> lambda) const { return tol * (x1_norm + std::abs(lambda) * x0_norm); }
  double match_tol(std::complex<double> lambda) const { return 1e-6 * (rho + std::abs(lambda)); }
};

inline PencilContext make_pencil_context(const Tensor3& x0, const Tensor3& x1, const InformativityOptions& opt,
                                         bool intersect) {
  PencilContext ctx;
  const double sr = std::sqrt(static_cast<double>(x0.depth()));
  ctx.x0_norm = sr * x0.frobenius_norm();
  ctx.x1_norm = sr * x1.frobenius_norm();
  ctx.rho = (ctx.x0_norm > 0.0 && ctx.x1_norm > 0.0) ? ctx.x1_norm / ctx.x0_norm : 1.0;
  Rng rng(opt.seed, 7);
  for (auto& s : ctx.shifts) {
    const double angle = 2.0 * std::numbers::pi * rng.unit();
    s = std::polar(ctx.rho * (0.5 + rng.unit()), angle);
  }
  ctx.tol = opt.tol.pencil;
  ctx.seed = opt.seed;
  ctx.intersect_draws = intersect;
  return ctx;
}

struct PencilResult {
  Index generic_rank = 0;
  bool generic_deficient = false;
  std::vector<Candidate> candidates;
};

// Smallest singular value of P1 - lambda P0 after a few Rayleigh-quotient
// style updates lambda <- lambda + u^H P(lambda) v / (u^H P0 v) driven by the
// smallest singular triplet; returns the final lambda and its rank.
inline std::pair<std::complex<double>, Index> verify_root(const CMatrix& p1, const CMatrix& p0,
                                                          std::complex<double> lambda, const PencilContext& ctx) {
  const Index rows = p1.rows();
  auto measure = [&](std::complex<double> l) {
    const Vector sv = singular_values(CMatrix(p1 - l * p0));
    return std::pair{sv, count_above(sv, ctx.threshold(l))};
  };
  auto [sv, rank] = measure(lambda);
  if (rank >= rows && sv.size() == rows && sv(rows - 1) <= 1e4 * ctx.threshold(lambda)) {
    for (int it = 0; it < 3 && rank >= rows; ++it) {
      Eigen::BDCSVD<CMatrix> svd(CMatrix(p1 - lambda * p0), Eigen::ComputeThinU | Eigen::ComputeThinV);
      const Index last = svd.singularValues().size() - 1;
      const auto u = svd.matrixU().col(last);
      const auto v = svd.matrixV().col(last);
      const std::complex<double> denom = u.dot(p0 * v);
      if (std::abs(denom) == 0.0) break;
      const std::complex<double> next = lambda + u.dot((p1 - lambda * p0) * v) / denom;
      auto [sv2, rank2] = measure(next);
      const Index tail = sv2.size() - 1;
      if (sv2(tail) / ctx.threshold(next) >= sv(rows - 1) / ctx.threshold(lambda)) break;
      lambda = next;
      sv = std::move(sv2);
      rank = rank2;
    }
  }
  return {lambda, rank};
}

inline PencilResult analyze_pencil(const CMatrix& p1, const CMatrix& p0, const PencilContext& ctx,
                                   std::uint64_t stream) {
  const Index rows = p1.rows(), cols = p1.cols();
  PencilResult out;

  // (1) generic rank
  Index ranks[2];
  double slack[2];
  for (int i = 0; i < 2; ++i) {
    const Vector sv = singular_values(CMatrix(p1 - ctx.shifts[i] * p0));
    ranks[i] = count_above(sv, ctx.threshold(ctx.shifts[i]));
    slack[i] = sv.size() == rows ? sv(rows - 1) / std::max(ctx.threshold(ctx.shifts[i]), 1e-300) : 0.0;
  }
  out.generic_rank = std::max(ranks[0], ranks[1]);
  if (out.generic_rank < rows) {
    out.generic_deficient = true;
    return out;
  }
  const std::complex<double> sigma = slack[0] >= slack[1] ? ctx.shifts[0] : ctx.shifts[1];

  // (2) candidate roots from two independent compressions
  std::vector<std::complex<double>> draws[2];
  for (int d = 0; d < 2; ++d) {
    Rng rng(ctx.seed, stream * 2 + static_cast<std::uint64_t>(d) + 1000003);
    CMatrix w(cols, rows);
    for (Index j = 0; j < rows; ++j) {
      for (Index i = 0; i < cols; ++i) w(i, j) = rng.complex_normal();
    }
    const CMatrix m0 = p0 * w;
    const CMatrix shifted = p1 * w - sigma * m0;
    const CMatrix k = shifted.partialPivLu().solve(m0);
    const CVector mu = Eigen::ComplexEigenSolver<CMatrix>(k, false).eigenvalues();
    for (Index i = 0; i < mu.size(); ++i) {
      // mu ~ 0 is a root at infinity.
      if (std::abs(mu(i)) * (ctx.rho + std::abs(sigma)) > 1e-10) draws[d].push_back(sigma + 1.0 / mu(i));
    }
  }
  std::vector<std::complex<double>> pool;
  if (ctx.intersect_draws) {
    for (auto l : draws[0]) {
      for (auto m : draws[1]) {
        if (std::abs(l - m) <= ctx.match_tol(l)) {
          pool.push_back(l);
          break;
        }
      }
    }
  } else {
    pool = draws[0];
    pool.insert(pool.end(), draws[1].begin(), draws[1].end());
  }

  // Merge near-duplicates so each distinct root is verified once.
  std::vector<std::complex<double>> reps;
  for (auto l : pool) {
    bool seen = false;
    for (auto q : reps) seen = seen || std::abs(l - q) <= ctx.match_tol(q);
    if (!seen) reps.push_back(l);
  }

  // (3) verification on the uncompressed pencil
  for (auto l : reps) {
    auto [lambda, rank] = verify_root(p1, p0, l, ctx);
    Candidate c;
    c.lambda = lambda;
    c.rank = rank;
    c.deficient = rank < rows;
    out.candidates.push_back(c);
  }
  return out;
}

inline InformativityReport pencil_test(TestKind kind, const Tensor3& x0, const Tensor3& x1, Method method,
                                       const InformativityOptions& opt) {
  Stopwatch clock;
  InformativityReport rep;
  rep.test = kind;
  rep.method = method;
  rep.dims = x0.dims();
  rep.tol = opt.tol;
  rep.seed = opt.seed;
  const Dims d = x0.dims();
  const auto ctx = make_pencil_context(x0, x1, opt, method == Method::dense);
  rep.rank_threshold = ctx.threshold(ctx.shifts[0]);

  if (method == Method::fourier) {
    const auto x0b = dft_mode3(x0);
    const auto x1b = dft_mode3(x1);
    const std::size_t r = x0b.size();
    std::vector<PencilResult> results(r);
    parallel_for(r, opt.threads, [&](std::size_t k) { results[k] = analyze_pencil(x1b[k], x0b[k], ctx, k); });
    rep.required_rank = d.n;
    for (std::size_t k = 0; k < r; ++k) {
      rep.per_block.push_back({k, results[k].generic_rank, std::nullopt});
      rep.total_rank += results[k].generic_rank;
      rep.generic_deficient = rep.generic_deficient || results[k].generic_deficient;
      for (auto c : results[k].candidates) {
        c.block = k;
        rep.candidates.push_back(c);
      }
    }
  } else {
    const CMatrix p0 = bcirc(x0).cast<std::complex<double>>();
    const CMatrix p1 = bcirc(x1).cast<std::complex<double>>();
    auto res = analyze_pencil(p1, p0, ctx, 0);
    rep.required_rank = d.n * d.r;
    rep.total_rank = res.generic_rank;
    rep.generic_deficient = res.generic_deficient;
    rep.candidates = std::move(res.candidates);
  }

  bool ok = !rep.generic_deficient;
  for (auto& c : rep.candidates) {
    c.exempt = opt.tol.is_stable(std::abs(c.lambda));
    if (c.deficient && (kind == TestKind::controllability || !c.exempt)) ok = false;
  }
  rep.verdict = ok;
  rep.seconds = clock.seconds();
  return rep;
}

}  // namespace detail

/// Rank of X1 - lambda X0 is full (n per block, nr overall) for every complex
/// lambda. U0 is part of the data set but does not enter the test.
inline InformativityReport informative_controllability(const Tensor3* u0, const Tensor3& x0, const Tensor3& x1,
                                                       Method method, const InformativityOptions& opt = {}) {
  detail::require_data_shapes(x0, &x1, u0);
  return detail::pencil_test(TestKind::controllability, x0, x1, method, opt);
}

/// As informative_controllability, but rank drops strictly inside the
/// stability region (|lambda| < 1 - tol_stab) are allowed.
inline InformativityReport informative_stabilizability(const Tensor3* u0, const Tensor3& x0, const Tensor3& x1,
                                                       Method method, const InformativityOptions& opt = {}) {
  detail::require_data_shapes(x0, &x1, u0);
  return detail::pencil_test(TestKind::stabilizability, x0, x1, method, opt);
}

/// Runs any of the four tests on a data set.
inline InformativityReport check(TestKind kind, const DataTensors& data, Method method,
                                 const InformativityOptions& opt = {}) {
  const Tensor3* u0 = data.u0 ? &*data.u0 : nullptr;
  switch (kind) {
    case TestKind::sysid: return informative_sysid(data.x0, method, opt);
    case TestKind::stability: return informative_stability(data.x0, data.x1, method, opt);
    case TestKind::controllability: return informative_controllability(u0, data.x0, data.x1, method, opt);
    case TestKind::stabilizability: return informative_stabilizability(u0, data.x0, data.x1, method, opt);
  }
  throw Error("unknown test");
}

}  // namespace tpds
