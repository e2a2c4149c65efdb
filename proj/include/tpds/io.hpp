#pragma once

// T3v1 text format.
//
//   t3 <n> <m> <r>
//   <n lines of m numbers: slice 0, row by row>
//   <blank line>
//   <n lines of m numbers: slice 1>
//   ...
//
// Numbers are written with 17 significant digits so doubles round-trip
// exactly. Lines starting with '#' are comments. Blank lines are ignored by
// the reader, and both LF and CRLF line endings are accepted.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <filesystem>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tpds/tensor3.hpp"

namespace tpds {

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_t3(std::ostream& os, const Tensor3& t) {
  os << "t3 " << t.rows() << ' ' << t.cols() << ' ' << t.depth() << '\n';
  for (Index k = 0; k < t.depth(); ++k) {
    if (k > 0) os << '\n';
    for (Index i = 0; i < t.rows(); ++i) {
      for (Index j = 0; j < t.cols(); ++j) {
        if (j > 0) os << ' ';
        os << format_double(t(i, j, k));
      }
      os << '\n';
    }
  }
}

inline std::string to_t3_string(const Tensor3& t) {
  std::ostringstream os;
  write_t3(os, t);
  return os.str();
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline double parse_double(std::string_view tok, std::size_t line) {
  std::string s(tok);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty()) throw ParseError("not a number: '" + s + "'", line);
  return v;
}

inline Index parse_dim(std::string_view tok, std::size_t line) {
  Index v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size() || v < 1) {
    throw ParseError("invalid dimension '" + std::string(tok) + "'", line);
  }
  return v;
}

}  // namespace detail

inline Tensor3 read_t3(std::istream& is) {
  std::string raw;
  std::size_t lineno = 0;
  Dims dims;
  bool have_header = false;
  std::vector<double> values;  // row-major per slice, as in the file
  std::size_t data_lines = 0;

  while (std::getline(is, raw)) {
    ++lineno;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto toks = detail::split_ws(line);
    if (toks.empty() || toks[0].front() == '#') continue;
    if (!have_header) {
      if (toks.size() != 4 || toks[0] != "t3") throw ParseError("expected header 't3 n m r'", lineno);
      dims = {detail::parse_dim(toks[1], lineno), detail::parse_dim(toks[2], lineno), detail::parse_dim(toks[3], lineno)};
      values.reserve(static_cast<std::size_t>(dims.n * dims.m * dims.r));
      have_header = true;
      continue;
    }
    if (data_lines == static_cast<std::size_t>(dims.n * dims.r)) throw ParseError("unexpected trailing data", lineno);
    if (toks.size() != static_cast<std::size_t>(dims.m)) {
      throw ParseError("expected " + std::to_string(dims.m) + " values, found " + std::to_string(toks.size()), lineno);
    }
    for (auto tok : toks) values.push_back(detail::parse_double(tok, lineno));
    ++data_lines;
  }
  if (!have_header) throw ParseError("missing 't3' header", lineno);
  if (data_lines != static_cast<std::size_t>(dims.n * dims.r)) {
    throw ParseError("truncated tensor: expected " + std::to_string(dims.n * dims.r) + " rows, found " +
                         std::to_string(data_lines),
                     lineno);
  }
  Tensor3 t(dims);
  std::size_t p = 0;
  for (Index k = 0; k < dims.r; ++k) {
    for (Index i = 0; i < dims.n; ++i) {
      for (Index j = 0; j < dims.m; ++j) t(i, j, k) = values[p++];
    }
  }
  return t;
}

inline Tensor3 parse_t3(const std::string& text) {
  std::istringstream is(text);
  return read_t3(is);
}

inline void save_t3(const std::filesystem::path& path, const Tensor3& t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  write_t3(os, t);
  if (!os) throw Error("failed writing " + path.string());
}

inline Tensor3 load_t3(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  try {
    return read_t3(is);
  } catch (const ParseError& e) {
    throw ParseError(path.string(), e);
  }
}

}  // namespace tpds
