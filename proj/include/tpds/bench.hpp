#pragma once

// Wall-clock comparison of the dense (unfolding-based) and Fourier-block
// informativity checks over a grid r = 2^p.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <sys/utsname.h>

#include "tpds/datagen.hpp"
#include "tpds/informativity.hpp"
#include "tpds/io.hpp"

namespace tpds {

struct BenchConfig {
  TestKind test = TestKind::sysid;
  Index n = 2, h = 2, l = 10;
  std::vector<int> p_range = {2, 3, 4, 5, 6};
  int reps = 5;
  std::uint64_t seed = 1;
  int threads = 1;
  double time_cap = 120.0;  ///< seconds per measured call
  InformativityOptions options;
};

struct BenchRecord {
  TestKind test = TestKind::sysid;
  Method method = Method::dense;
  Index r = 0, n = 0, h = 0, l = 0;
  int reps = 0;
  int threads = 1;
  double time_s = 0.0;  ///< median over repetitions
  bool skipped = false; ///< not run: an earlier point exceeded the time cap
  bool verdict = false;

  double time_per_r() const { return time_s / static_cast<double>(r); }
  double time_per_r3() const { return time_s / std::pow(static_cast<double>(r), 3); }
};

inline const char* method_label(Method m) { return m == Method::dense ? "unfold" : "fourier"; }

inline std::vector<int> default_p_range(TestKind kind) {
  switch (kind) {
    case TestKind::sysid: return {2, 3, 4, 5, 6, 7, 8, 9, 10};
    case TestKind::stability: return {2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    default: return {2, 3, 4, 5, 6, 7, 8, 9};
  }
}

inline void validate(const BenchConfig& cfg) {
  if (cfg.p_range.empty()) throw Error("bench: empty p range");
  if (!std::is_sorted(cfg.p_range.begin(), cfg.p_range.end()) ||
      std::adjacent_find(cfg.p_range.begin(), cfg.p_range.end()) != cfg.p_range.end()) {
    throw Error("bench: p range must be strictly ascending");
  }
  if (cfg.p_range.front() < 0 || cfg.p_range.back() > 24) throw Error("bench: p out of range");
  if (cfg.reps < 1) throw Error("bench: repetitions must be >= 1");
  if (cfg.n < 1 || cfg.h < 1 || cfg.l < 1) throw Error("bench: dimensions must be positive");
}

/// Data for one grid point; depends only on (seed, r, dims).
inline DataTensors bench_data(const BenchConfig& cfg, Index r) {
  GenSpec g;
  g.n = cfg.n;
  g.h = cfg.h;
  g.l = cfg.l;
  g.r = r;
  g.seed = splitmix64(cfg.seed ^ static_cast<std::uint64_t>(r));
  return generate(g).data;
}

inline std::vector<BenchRecord> run_experiment(const BenchConfig& cfg) {
  validate(cfg);
  std::vector<BenchRecord> out;
  bool exhausted[2] = {false, false};
  const Method methods[2] = {Method::dense, Method::fourier};

  for (int p : cfg.p_range) {
    const Index r = Index{1} << p;
    const DataTensors data = bench_data(cfg, r);
    for (int mi = 0; mi < 2; ++mi) {
      BenchRecord rec;
      rec.test = cfg.test;
      rec.method = methods[mi];
      rec.r = r;
      rec.n = cfg.n;
      rec.h = cfg.h;
      rec.l = cfg.l;
      rec.reps = cfg.reps;
      rec.threads = methods[mi] == Method::fourier ? cfg.threads : 1;
      if (exhausted[mi]) {
        rec.skipped = true;
        out.push_back(rec);
        continue;
      }
      InformativityOptions opt = cfg.options;
      opt.threads = rec.threads;
      auto timed = [&] {
        const auto t0 = std::chrono::steady_clock::now();
        const auto rep = check(cfg.test, data, methods[mi], opt);
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return std::pair{s, rep.verdict};
      };
      const auto warm = timed();
      rec.verdict = warm.second;
      if (warm.first > cfg.time_cap) {
        rec.time_s = warm.first;
        rec.reps = 1;
        exhausted[mi] = true;
        out.push_back(rec);
        continue;
      }
      std::vector<double> times;
      for (int i = 0; i < cfg.reps; ++i) times.push_back(timed().first);
      std::sort(times.begin(), times.end());
      const std::size_t mid = times.size() / 2;
      rec.time_s = times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
      if (rec.time_s > cfg.time_cap) exhausted[mi] = true;
      out.push_back(rec);
    }
  }
  return out;
}

/// Least-squares slope of log(time) against log(r) over the four largest
/// measured grid points of `method` (all of them if fewer than four).
inline double fit_slope(const std::vector<BenchRecord>& records, Method method) {
  std::vector<const BenchRecord*> pts;
  for (const auto& rec : records) {
    if (rec.method == method && !rec.skipped && rec.time_s > 0.0) pts.push_back(&rec);
  }
  if (pts.size() < 3) throw InsufficientData("fit_slope needs at least three measured points");
  std::sort(pts.begin(), pts.end(), [](auto a, auto b) { return a->r < b->r; });
  if (pts.size() > 4) pts.erase(pts.begin(), pts.end() - 4);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(pts.size());
  for (auto* rec : pts) {
    const double x = std::log(static_cast<double>(rec->r)), y = std::log(rec->time_s);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

inline void write_csv(std::ostream& os, const std::vector<BenchRecord>& records) {
  os << "test,method,r,n,h,l,reps,threads,time_s,time_per_r,time_per_r3\r\n";
  for (const auto& rec : records) {
    os << csv_field(to_string(rec.test)) << ',' << csv_field(method_label(rec.method)) << ',' << rec.r << ','
       << rec.n << ',' << rec.h << ',' << rec.l << ',' << rec.reps << ',' << rec.threads << ',';
    if (rec.skipped) {
      os << "skipped,skipped,skipped";
    } else {
      os << format_double(rec.time_s) << ',' << format_double(rec.time_per_r()) << ','
         << format_double(rec.time_per_r3());
    }
    os << "\r\n";
  }
}

inline std::string host_description() {
  utsname u{};
  if (uname(&u) != 0) return "unknown host";
  return std::string(u.sysname) + " " + u.release + " " + u.machine;
}

/// Writes `<csv>.meta.txt` next to the CSV.
inline void write_metadata(const std::filesystem::path& csv_path, const BenchConfig& cfg,
                           const std::vector<BenchRecord>& records) {
  std::ofstream os(csv_path.string() + ".meta.txt", std::ios::binary);
  if (!os) throw Error("cannot write metadata for " + csv_path.string());
  os << "test=" << to_string(cfg.test) << '\n'
     << "seed=" << cfg.seed << '\n'
     << "n=" << cfg.n << "\nh=" << cfg.h << "\nl=" << cfg.l << '\n'
     << "p_range=";
  for (std::size_t i = 0; i < cfg.p_range.size(); ++i) os << (i ? " " : "") << cfg.p_range[i];
  os << "\nreps=" << cfg.reps << "\nthreads=" << cfg.threads << "\ntime_cap_s=" << format_double(cfg.time_cap) << '\n'
     << "tol_rank=" << (cfg.options.tol.rank ? format_double(*cfg.options.tol.rank) : std::string("default")) << '\n'
     << "tol_stab=" << format_double(cfg.options.tol.stab) << '\n'
     << "tol_pencil=" << format_double(cfg.options.tol.pencil) << '\n'
     << "timing=median of reps after one discarded warm-up; data generation excluded\n"
     << "host=" << host_description() << '\n';
  if (cfg.test == TestKind::controllability || cfg.test == TestKind::stabilizability) {
    os << "note=rank over all lambda decided by compressed-pencil candidate roots plus SVD verification "
          "(no symbolic rank computation)\n";
  }
  bool agree = true;
  for (const auto& a : records) {
    for (const auto& b : records) {
      if (a.r == b.r && a.method != b.method && !a.skipped && !b.skipped && a.verdict != b.verdict) agree = false;
    }
  }
  os << "verdicts_agree=" << agree << '\n';
  for (const auto& rec : records) {
    if (rec.skipped) os << "skipped=" << method_label(rec.method) << " r=" << rec.r << '\n';
  }
}

}  // namespace tpds
