#pragma once

// Simulation of T-product dynamical systems
//
//   X(t+1) = A * X(t)              (autonomous)
//   X(t+1) = A * X(t) + B * U(t)   (with inputs)
//
// and construction of the data tensors X0 = [X(0) .. X(l-1)],
// X1 = [X(1) .. X(l)], U0 = [U(0) .. U(l-1)] (concatenated along mode 2).
//
// Random generation is reproducible across platforms: every draw comes from
// std::mt19937_64 (fully specified by the standard) seeded with
// splitmix64(seed) ^ splitmix64(stream), and normal variates use the Marsaglia
// polar method on 53-bit uniforms instead of std::normal_distribution, whose
// output is implementation-defined.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tpds/decomp.hpp"
#include "tpds/io.hpp"
#include "tpds/tproduct.hpp"

namespace tpds {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

enum class Distribution { normal, uniform };

class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : engine_(splitmix64(seed) ^ splitmix64(~stream)) {}

  /// Uniform on [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * unit() - 1.0;
      v = 2.0 * unit() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  double draw(Distribution d) { return d == Distribution::normal ? normal() : uniform(-1.0, 1.0); }

  std::complex<double> complex_normal() {
    const double re = normal();
    return {re, normal()};
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Tensor with i.i.d. entries, filled in storage order.
inline Tensor3 random_tensor(Index n, Index m, Index r, std::uint64_t seed,
                             Distribution dist = Distribution::normal, std::uint64_t stream = 0) {
  Tensor3 t(n, m, r);
  Rng rng(seed, stream);
  for (double& x : t.data()) x = rng.draw(dist);
  return t;
}

/// Random n x n x r state-transition tensor. With a target radius the tensor
/// is rescaled so that its spectral radius equals the target.
inline Tensor3 random_system(Index n, Index r, std::uint64_t seed, std::optional<double> target_radius = std::nullopt,
                             std::uint64_t stream = 0) {
  Tensor3 a = random_tensor(n, n, r, seed, Distribution::normal, stream);
  if (target_radius) {
    const double rho = spectral_radius(a);
    if (rho > 0.0) a *= *target_radius / rho;
  }
  return a;
}

struct Trajectory {
  std::vector<Tensor3> states;
  std::vector<Tensor3> inputs;  ///< empty for autonomous runs
};

struct DataTensors {
  Tensor3 x0;
  Tensor3 x1;
  std::optional<Tensor3> u0;
};

inline Trajectory simulate(const Tensor3& a, const Tensor3& x_init, int steps) {
  if (a.rows() != a.cols()) throw DimensionMismatch("state transition tensor must have square slices");
  if (x_init.rows() != a.rows() || x_init.depth() != a.depth()) {
    throw DimensionMismatch("initial state " + to_string(x_init.dims()) + " does not fit " + to_string(a.dims()));
  }
  if (steps < 1) throw DimensionMismatch("at least one step is required");
  Trajectory traj;
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);
  traj.states.push_back(x_init);
  for (int t = 0; t < steps; ++t) traj.states.push_back(t_product(a, traj.states.back()));
  return traj;
}

inline Trajectory simulate_controlled(const Tensor3& a, const Tensor3& b, const Tensor3& x_init,
                                      const std::vector<Tensor3>& inputs) {
  if (a.rows() != a.cols()) throw DimensionMismatch("state transition tensor must have square slices");
  if (b.rows() != a.rows() || b.depth() != a.depth()) {
    throw DimensionMismatch("control tensor " + to_string(b.dims()) + " does not fit " + to_string(a.dims()));
  }
  if (x_init.rows() != a.rows() || x_init.depth() != a.depth()) {
    throw DimensionMismatch("initial state " + to_string(x_init.dims()) + " does not fit " + to_string(a.dims()));
  }
  if (inputs.empty()) throw DimensionMismatch("at least one input is required");
  Trajectory traj;
  traj.states.push_back(x_init);
  for (const auto& u : inputs) {
    if (u.rows() != b.cols() || u.cols() != x_init.cols() || u.depth() != a.depth()) {
      throw DimensionMismatch("input " + to_string(u.dims()) + " does not fit the system");
    }
    traj.states.push_back(t_product(a, traj.states.back()) + t_product(b, u));
  }
  traj.inputs = inputs;
  return traj;
}

inline DataTensors assemble(const Trajectory& traj) {
  if (traj.states.size() < 2) throw InsufficientData("a trajectory needs at least two states");
  if (!traj.inputs.empty() && traj.inputs.size() + 1 != traj.states.size()) {
    throw DimensionMismatch("trajectory has " + std::to_string(traj.inputs.size()) + " inputs for " +
                            std::to_string(traj.states.size()) + " states");
  }
  const std::span<const Tensor3> states(traj.states);
  DataTensors out{concat_cols(states.first(states.size() - 1)), concat_cols(states.subspan(1)), std::nullopt};
  if (!traj.inputs.empty()) out.u0 = concat_cols(traj.inputs);
  return out;
}

enum class GenMode { random, simulate };

/// Parameters of a generated data set; `m` > 0 adds inputs.
struct GenSpec {
  Index n = 2, h = 2, l = 10, r = 4, m = 0;
  std::uint64_t seed = 0;
  GenMode mode = GenMode::random;
  double radius = 0.9;
  Distribution dist = Distribution::normal;
};

struct GeneratedData {
  DataTensors data;
  std::optional<Tensor3> a;
  std::optional<Tensor3> b;
  Trajectory trajectory;
};

// Streams: 0 = A, 1 = B, 2 = X(0), 100 + t = U(t), 1000 + t = random X(t).
inline GeneratedData generate(const GenSpec& g) {
  if (g.n < 1 || g.h < 1 || g.l < 1 || g.r < 1 || g.m < 0) throw ShapeMismatch("generator dimensions must be positive");
  GeneratedData out;
  std::vector<Tensor3> inputs;
  for (Index t = 0; g.m > 0 && t < g.l; ++t) {
    inputs.push_back(random_tensor(g.m, g.h, g.r, g.seed, g.dist, 100 + static_cast<std::uint64_t>(t)));
  }
  if (g.mode == GenMode::random) {
    for (Index t = 0; t <= g.l; ++t) {
      out.trajectory.states.push_back(random_tensor(g.n, g.h, g.r, g.seed, g.dist, 1000 + static_cast<std::uint64_t>(t)));
    }
    out.trajectory.inputs = std::move(inputs);
  } else {
    out.a = random_system(g.n, g.r, g.seed, g.radius, 0);
    const Tensor3 x_init = random_tensor(g.n, g.h, g.r, g.seed, g.dist, 2);
    if (g.m > 0) {
      out.b = random_tensor(g.n, g.m, g.r, g.seed, g.dist, 1);
      out.trajectory = simulate_controlled(*out.a, *out.b, x_init, inputs);
    } else {
      out.trajectory = simulate(*out.a, x_init, static_cast<int>(g.l));
    }
  }
  out.data = assemble(out.trajectory);
  return out;
}

/// Archive manifest: `key=value` lines plus one `file=` line per tensor file,
/// in order.
struct Manifest {
  std::string mode = "random";
  std::uint64_t seed = 0;
  Index n = 0, h = 0, l = 0, r = 0, m = 0;
  std::vector<std::string> files;
};

inline void write_manifest(const std::filesystem::path& path, const Manifest& mf) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << "# tpds manifest v1\n"
     << "mode=" << mf.mode << '\n'
     << "seed=" << mf.seed << '\n'
     << "n=" << mf.n << '\n'
     << "h=" << mf.h << '\n'
     << "l=" << mf.l << '\n'
     << "r=" << mf.r << '\n'
     << "m=" << mf.m << '\n';
  for (const auto& f : mf.files) os << "file=" << f << '\n';
  if (!os) throw Error("failed writing " + path.string());
}

inline Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  Manifest mf;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", lineno);
    const std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    try {
      if (key == "mode") mf.mode = value;
      else if (key == "seed") mf.seed = std::stoull(value);
      else if (key == "n") mf.n = std::stoll(value);
      else if (key == "h") mf.h = std::stoll(value);
      else if (key == "l") mf.l = std::stoll(value);
      else if (key == "r") mf.r = std::stoll(value);
      else if (key == "m") mf.m = std::stoll(value);
      else if (key == "file") mf.files.push_back(value);
      else throw ParseError("unknown key '" + key + "'", lineno);
    } catch (const std::logic_error&) {
      throw ParseError("bad value for '" + key + "'", lineno);
    }
  }
  return mf;
}

}  // namespace tpds
