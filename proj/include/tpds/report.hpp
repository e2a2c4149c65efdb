#pragma once

// Text and line-oriented machine renderings of InformativityReport.
//
// Machine format: `key=value` lines, then one `block k rank=...` line per
// Fourier block (with `radius=...` for the stability test), then one
// `candidate λ=a+bi rank=...` line per examined root.

#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include "tpds/informativity.hpp"
#include "tpds/io.hpp"

namespace tpds {

enum class ReportFormat { text, machine };

inline std::string format_complex(std::complex<double> z, bool exact = true) {
  auto fmt = [exact](double x) {
    if (exact) return format_double(x);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return std::string(buf);
  };
  return fmt(z.real()) + (std::signbit(z.imag()) ? "-" : "+") + fmt(std::abs(z.imag())) + "i";
}

namespace detail {

inline void write_detail_lines(std::ostream& os, const InformativityReport& rep, bool exact) {
  auto num = [exact](double x) {
    if (exact) return format_double(x);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return std::string(buf);
  };
  for (const auto& b : rep.per_block) {
    os << "block " << b.index << " rank=" << b.rank;
    if (b.radius) os << " radius=" << num(*b.radius);
    os << '\n';
  }
  for (const auto& c : rep.candidates) {
    os << "candidate λ=" << format_complex(c.lambda, exact) << " rank=" << c.rank << " deficient=" << c.deficient
       << " exempt=" << c.exempt;
    if (c.block) os << " block=" << *c.block;
    os << '\n';
  }
}

}  // namespace detail

inline void write_machine(std::ostream& os, const InformativityReport& rep) {
  os << "test=" << to_string(rep.test) << '\n'
     << "method=" << to_string(rep.method) << '\n'
     << "verdict=" << (rep.verdict ? "informative" : "not_informative") << '\n'
     << "n=" << rep.dims.n << '\n'
     << "cols=" << rep.dims.m << '\n'
     << "r=" << rep.dims.r << '\n'
     << "required_rank=" << rep.required_rank << '\n'
     << "total_rank=" << rep.total_rank << '\n'
     << "rank_threshold=" << format_double(rep.rank_threshold) << '\n'
     << "tol_rank=" << (rep.tol.rank ? format_double(*rep.tol.rank) : std::string("default")) << '\n'
     << "tol_stab=" << format_double(rep.tol.stab) << '\n'
     << "stab_inclusive=" << rep.tol.stab_inclusive << '\n'
     << "tol_pencil=" << format_double(rep.tol.pencil) << '\n'
     << "seed=" << rep.seed << '\n';
  if (rep.max_radius) os << "max_radius=" << format_double(*rep.max_radius) << '\n';
  if (rep.test == TestKind::controllability || rep.test == TestKind::stabilizability) {
    os << "generic_deficient=" << rep.generic_deficient << '\n';
  }
  os << "time_s=" << format_double(rep.seconds) << '\n';
  detail::write_detail_lines(os, rep, true);
}

inline void write_text(std::ostream& os, const InformativityReport& rep) {
  char buf[64];
  os << to_string(rep.test) << " informativity (" << to_string(rep.method)
     << " method): " << (rep.verdict ? "INFORMATIVE" : "NOT INFORMATIVE") << '\n';
  os << "  data: " << to_string(rep.dims) << ", rank " << rep.total_rank << " of "
     << (rep.method == Method::fourier ? rep.required_rank * rep.dims.r : rep.required_rank) << " required\n";
  std::snprintf(buf, sizeof buf, "%.3e", rep.rank_threshold);
  os << "  rank threshold: " << buf << '\n';
  if (rep.max_radius) {
    std::snprintf(buf, sizeof buf, "%.10g", *rep.max_radius);
    os << "  max spectral radius: " << buf << '\n';
  }
  if (rep.test == TestKind::controllability || rep.test == TestKind::stabilizability) {
    os << "  generically rank deficient: " << (rep.generic_deficient ? "yes" : "no") << '\n';
    os << "  candidate roots examined: " << rep.candidates.size() << '\n';
  }
  std::snprintf(buf, sizeof buf, "%.3e", rep.seconds);
  os << "  time: " << buf << " s\n";
  detail::write_detail_lines(os, rep, false);
}

inline std::string render(const InformativityReport& rep, ReportFormat fmt) {
  std::ostringstream os;
  if (fmt == ReportFormat::machine) {
    write_machine(os, rep);
  } else {
    write_text(os, rep);
  }
  return os.str();
}

}  // namespace tpds
