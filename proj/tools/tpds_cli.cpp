// tpds: command-line front end.
//
//   tpds gen       --n --h --l --r [--m] --mode {random|simulate} [--radius] --out DIR
//   tpds identify  --x0 FILE --x1 FILE [--out FILE]
//   tpds check     {sysid|stability|controllability|stabilizability} --x0 FILE [--x1 FILE] [--u0 FILE]
//   tpds bench     {sysid|stability|controllability} --pmin P --pmax P [--reps K] [--out FILE]
//
// Exit codes: 0 informative / success, 1 not informative, 2 error,
// 3 identification not unique.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tpds/tpds.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kInformative = 0;
constexpr int kNotInformative = 1;
constexpr int kError = 2;
constexpr int kNotUnique = 3;

struct Global {
  std::optional<double> tol_rank;
  double tol_stab = 1e-9;
  bool stab_inclusive = false;
  double tol_pencil = 1e-8;
  std::uint64_t seed = 0;
  std::string method = "fourier";
  std::string format = "text";
  std::optional<int> threads;

  tpds::InformativityOptions options() const {
    tpds::InformativityOptions o;
    o.tol.rank = tol_rank;
    o.tol.stab = tol_stab;
    o.tol.stab_inclusive = stab_inclusive;
    o.tol.pencil = tol_pencil;
    o.seed = seed;
    o.threads = thread_count();
    return o;
  }

  int thread_count() const {
    if (threads) return *threads;
    if (const char* env = std::getenv("TPDS_THREADS")) {
      try {
        const int v = std::stoi(env);
        if (v >= 1) return v;
      } catch (const std::exception&) {
      }
      throw tpds::Error(std::string("TPDS_THREADS must be a positive integer, got '") + env + "'");
    }
    return 1;
  }
};

const std::map<std::string, tpds::TestKind> kTests = {
    {"sysid", tpds::TestKind::sysid},
    {"stability", tpds::TestKind::stability},
    {"controllability", tpds::TestKind::controllability},
    {"stabilizability", tpds::TestKind::stabilizability},
};

struct GenArgs {
  long n = 2, h = 2, l = 10, r = 4, m = 0;
  std::string mode = "random";
  double radius = 0.9;
  std::string dist = "normal";
  std::string out = ".";
};

int run_gen(const Global& g, const GenArgs& a) {
  tpds::GenSpec spec;
  spec.n = a.n;
  spec.h = a.h;
  spec.l = a.l;
  spec.r = a.r;
  spec.m = a.m;
  spec.seed = g.seed;
  spec.mode = a.mode == "simulate" ? tpds::GenMode::simulate : tpds::GenMode::random;
  spec.radius = a.radius;
  spec.dist = a.dist == "uniform" ? tpds::Distribution::uniform : tpds::Distribution::normal;
  const auto gen = tpds::generate(spec);

  const fs::path dir(a.out);
  fs::create_directories(dir);
  tpds::Manifest mf;
  mf.mode = a.mode;
  mf.seed = g.seed;
  mf.n = a.n;
  mf.h = a.h;
  mf.l = a.l;
  mf.r = a.r;
  mf.m = a.m;
  auto save = [&](const std::string& name, const tpds::Tensor3& t) {
    tpds::save_t3(dir / name, t);
    mf.files.push_back(name);
  };
  if (gen.a) save("a.t3", *gen.a);
  if (gen.b) save("b.t3", *gen.b);
  save("x0.t3", gen.data.x0);
  save("x1.t3", gen.data.x1);
  if (gen.data.u0) save("u0.t3", *gen.data.u0);
  tpds::write_manifest(dir / "manifest.txt", mf);
  std::cout << "wrote " << mf.files.size() << " tensors to " << dir.string() << " (x0: "
            << tpds::to_string(gen.data.x0.dims()) << ")\n";
  return 0;
}

struct IdentifyArgs {
  std::string x0, x1, out = "a_hat.t3";
};

int run_identify(const Global& g, const IdentifyArgs& a) {
  const auto x0 = tpds::load_t3(a.x0);
  const auto x1 = tpds::load_t3(a.x1);
  const auto id = tpds::identify(x0, x1, g.options().tol);
  tpds::save_t3(a.out, id.a);
  if (g.format == "machine") {
    std::cout << "unique=" << id.unique << "\nresidual=" << tpds::format_double(id.residual)
              << "\nrank_threshold=" << tpds::format_double(id.rank_threshold) << "\nout=" << a.out << '\n';
    for (std::size_t k = 0; k < id.ranks.size(); ++k) std::cout << "block " << k << " rank=" << id.ranks[k] << '\n';
  } else {
    std::cout << "identified A: " << tpds::to_string(id.a.dims()) << " -> " << a.out << '\n'
              << "  residual (max-abs): " << id.residual << '\n'
              << "  unique: " << (id.unique ? "yes" : "no (minimum-norm solution)") << '\n';
  }
  return id.unique ? 0 : kNotUnique;
}

struct CheckArgs {
  std::string test;
  std::string x0, x1, u0;
};

int run_check(const Global& g, const CheckArgs& a) {
  const auto kind = kTests.at(a.test);
  tpds::DataTensors data;
  data.x0 = tpds::load_t3(a.x0);
  if (kind != tpds::TestKind::sysid) {
    if (a.x1.empty()) throw tpds::Error("check " + a.test + " requires --x1");
    data.x1 = tpds::load_t3(a.x1);
  }
  if (!a.u0.empty()) data.u0 = tpds::load_t3(a.u0);
  const auto method = g.method == "dense" ? tpds::Method::dense : tpds::Method::fourier;
  const auto rep = tpds::check(kind, data, method, g.options());
  std::cout << tpds::render(rep, g.format == "machine" ? tpds::ReportFormat::machine : tpds::ReportFormat::text);
  return rep.verdict ? kInformative : kNotInformative;
}

struct BenchArgs {
  std::string test;
  int pmin = 2, pmax = 6, reps = 5;
  long n = 2, h = 2, l = 10;
  double time_cap = 120.0;
  std::string out;
};

int run_bench(const Global& g, const BenchArgs& a) {
  if (a.pmax < a.pmin) throw tpds::Error("--pmax must be >= --pmin");
  tpds::BenchConfig cfg;
  cfg.test = kTests.at(a.test);
  cfg.n = a.n;
  cfg.h = a.h;
  cfg.l = a.l;
  cfg.p_range.clear();
  for (int p = a.pmin; p <= a.pmax; ++p) cfg.p_range.push_back(p);
  cfg.reps = a.reps;
  cfg.seed = g.seed;
  cfg.threads = g.thread_count();
  cfg.time_cap = a.time_cap;
  cfg.options = g.options();
  const auto records = tpds::run_experiment(cfg);

  const std::string out = a.out.empty() ? "bench_" + a.test + ".csv" : a.out;
  {
    std::ofstream os(out, std::ios::binary);
    if (!os) throw tpds::Error("cannot write " + out);
    tpds::write_csv(os, records);
  }
  tpds::write_metadata(out, cfg, records);

  std::cout << "wrote " << records.size() << " rows to " << out << '\n';
  for (const auto& rec : records) {
    if (rec.skipped) {
      std::cout << "  " << tpds::method_label(rec.method) << " r=" << rec.r << " skipped (time cap)\n";
    } else {
      std::cout << "  " << tpds::method_label(rec.method) << " r=" << rec.r << " time=" << rec.time_s
                << " s verdict=" << (rec.verdict ? "informative" : "not_informative") << '\n';
    }
  }
  for (auto m : {tpds::Method::dense, tpds::Method::fourier}) {
    try {
      std::cout << "slope " << tpds::method_label(m) << "=" << tpds::fit_slope(records, m) << '\n';
    } catch (const tpds::InsufficientData&) {
      std::cout << "slope " << tpds::method_label(m) << "=n/a (fewer than 3 points)\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tensor T-product dynamical systems: data generation, identification, informativity checks"};
  app.require_subcommand(1);
  app.fallthrough();
  // --h is a dimension flag, so help is long-form only
  app.set_help_flag("--help", "print help and exit");

  Global g;
  app.add_option("--tol-rank", g.tol_rank, "relative rank tolerance (default max(dims)*eps)")->check(CLI::PositiveNumber);
  app.add_option("--tol-stab", g.tol_stab, "stability margin: radius < 1 - tol")->check(CLI::NonNegativeNumber);
  app.add_flag("--stab-inclusive", g.stab_inclusive, "treat radius <= 1 as stable");
  app.add_option("--tol-pencil", g.tol_pencil, "relative threshold for pencil rank drops")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--method", g.method, "decision path")->check(CLI::IsMember({"fourier", "dense"}));
  app.add_option("--format", g.format, "report format")->check(CLI::IsMember({"text", "machine"}));
  app.add_option("--threads", g.threads, "worker threads (overrides TPDS_THREADS)")->check(CLI::PositiveNumber);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate data tensors");
  gen_cmd->add_option("--n", gen.n, "state rows")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--h", gen.h, "state columns")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--l", gen.l, "number of transitions")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--r", gen.r, "third-mode size")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--m", gen.m, "input rows (0 = no inputs)")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--mode", gen.mode, "random data or simulated trajectory")
      ->check(CLI::IsMember({"random", "simulate"}));
  gen_cmd->add_option("--radius", gen.radius, "spectral radius of A in simulate mode")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--dist", gen.dist, "entry distribution")->check(CLI::IsMember({"normal", "uniform"}));
  gen_cmd->add_option("--out", gen.out, "output directory");

  IdentifyArgs ida;
  auto* id_cmd = app.add_subcommand("identify", "identify A from X0, X1");
  id_cmd->add_option("--x0", ida.x0, "X0 tensor file")->required();
  id_cmd->add_option("--x1", ida.x1, "X1 tensor file")->required();
  id_cmd->add_option("--out", ida.out, "output file for the identified tensor");

  CheckArgs ca;
  auto* check_cmd = app.add_subcommand("check", "data informativity test");
  check_cmd->add_option("test", ca.test, "sysid|stability|controllability|stabilizability")
      ->required()
      ->check(CLI::IsMember({"sysid", "stability", "controllability", "stabilizability"}));
  check_cmd->add_option("--x0", ca.x0, "X0 tensor file")->required();
  check_cmd->add_option("--x1", ca.x1, "X1 tensor file");
  check_cmd->add_option("--u0", ca.u0, "U0 tensor file");

  BenchArgs ba;
  auto* bench_cmd = app.add_subcommand("bench", "time dense vs Fourier checks over r = 2^p");
  bench_cmd->add_option("test", ba.test, "sysid|stability|controllability")
      ->required()
      ->check(CLI::IsMember({"sysid", "stability", "controllability"}));
  bench_cmd->add_option("--pmin", ba.pmin, "smallest exponent")->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--pmax", ba.pmax, "largest exponent")->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--reps", ba.reps, "timed repetitions per point")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--n", ba.n)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--h", ba.h)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--l", ba.l)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--time-cap", ba.time_cap, "seconds per point before larger points are skipped")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out", ba.out, "CSV path (default bench_<test>.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  try {
    if (*gen_cmd) return run_gen(g, gen);
    if (*id_cmd) return run_identify(g, ida);
    if (*check_cmd) return run_check(g, ca);
    if (*bench_cmd) return run_bench(g, ba);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}
