#pragma once

// Deterministic text output (CSV, JSON) and the plain-text matrix input format.
//
// Matrix files: UTF-8 text, one row per line, entries separated by whitespace.
// Each entry is `re`, `re+imj` or `re-imj` (e.g. `0.5`, `1e-3-2.5j`). Blank
// lines and lines starting with '#' are ignored.

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "schmidt_lab/error.hpp"
#include "schmidt_lab/tensor_core.hpp"

namespace schmidt::io {

using json = nlohmann::ordered_json;

/// 17 significant digits, locale independent.
inline std::string format_double(double x) {
  if (x == 0.0) x = 0.0; // fold -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline void write_string(std::ostream &os, const std::string &s) {
  os << '"';
  for (char c : s) {
    switch (c) {
    case '"': os << "\\\""; break;
    case '\\': os << "\\\\"; break;
    case '\n': os << "\\n"; break;
    case '\t': os << "\\t"; break;
    case '\r': os << "\\r"; break;
    default:
      if (static_cast<unsigned char>(c) < 0x20) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "\\u%04x", c);
        os << buf;
      } else {
        os << c;
      }
    }
  }
  os << '"';
}

inline void write_json(std::ostream &os, const json &j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
  case json::value_t::object: {
    if (j.empty()) { os << "{}"; return; }
    os << "{\n";
    bool first = true;
    for (const auto &[k, v] : j.items()) {
      if (!first) os << ",\n";
      first = false;
      os << inner;
      write_string(os, k);
      os << ": ";
      write_json(os, v, indent + 1);
    }
    os << "\n" << pad << "}";
    return;
  }
  case json::value_t::array: {
    if (j.empty()) { os << "[]"; return; }
    // Arrays of scalars stay on one line.
    bool scalars = true;
    for (const auto &v : j) scalars = scalars && !v.is_structured();
    if (scalars) {
      os << "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ", ";
        write_json(os, j[i], indent + 1);
      }
      os << "]";
      return;
    }
    os << "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) os << ",\n";
      os << inner;
      write_json(os, j[i], indent + 1);
    }
    os << "\n" << pad << "]";
    return;
  }
  case json::value_t::number_float: {
    const double x = j.get<double>();
    if (!std::isfinite(x)) { os << "null"; return; }
    os << format_double(x);
    return;
  }
  case json::value_t::string: write_string(os, j.get<std::string>()); return;
  default: os << j.dump(); return;
  }
}

} // namespace detail

/// Pretty-printed JSON with insertion key order and 17-significant-digit floats.
inline std::string to_json_text(const json &j) {
  std::ostringstream os;
  detail::write_json(os, j, 0);
  os << "\n";
  return os.str();
}

/// Column-oriented CSV table; every value formatted with format_double.
class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(const std::vector<double> &row) {
    if (row.size() != header_.size()) throw DomainError("CSV row width does not match header");
    rows_.push_back(row);
  }

  const std::vector<std::string> &header() const noexcept { return header_; }
  std::size_t rows() const noexcept { return rows_.size(); }

  std::string str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << header_[i];
    os << "\n";
    for (const auto &r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_double(r[i]);
      os << "\n";
    }
    return os.str();
  }

private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

inline void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw Error("failed writing " + path);
}

// ---------------------------------------------------------------------------
// Matrix input.

namespace detail {

inline bool parse_real(std::string_view s, double &out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
}

/// Parses `re`, `re+imj`, `re-imj` or `imj`.
inline bool parse_entry(std::string_view tok, cplx &out) {
  if (tok.empty()) return false;
  if (tok.back() != 'j') {
    double re;
    if (!parse_real(tok, re)) return false;
    out = {re, 0.0};
    return true;
  }
  tok.remove_suffix(1);
  // Split at the last sign that is not a leading sign or an exponent sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = tok.size(); i-- > 1;) {
    if ((tok[i] == '+' || tok[i] == '-') && tok[i - 1] != 'e' && tok[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  double re = 0.0;
  double im = 0.0;
  if (split == std::string_view::npos) {
    if (!parse_real(tok, im)) return false;
  } else {
    if (!parse_real(tok.substr(0, split), re)) return false;
    if (!parse_real(tok.substr(split), im)) return false;
  }
  out = {re, im};
  return true;
}

} // namespace detail

inline Matrix parse_matrix(std::istream &in) {
  std::vector<std::vector<cplx>> rows;
  std::size_t first_line = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i == line.size() || line[i] == '#') continue;

    std::vector<cplx> row;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i == line.size()) break;
      std::size_t end = i;
      while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
      cplx v;
      const std::string_view tok(line.data() + i, end - i);
      if (!detail::parse_entry(tok, v))
        throw ParseError("cannot parse entry '" + std::string(tok) + "'", line_no, i + 1);
      row.push_back(v);
      i = end;
    }
    if (rows.empty()) first_line = line_no;
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("row has " + std::to_string(row.size()) + " entries, expected " +
                           std::to_string(rows.front().size()),
                       line_no, 1);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("matrix file contains no rows", 0, 0);
  if (rows.size() != rows.front().size())
    throw ParseError("matrix is " + std::to_string(rows.size()) + "x" + std::to_string(rows.front().size()) +
                         "; a square matrix is required",
                     first_line, 1);
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
  return m;
}

inline Matrix parse_matrix_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file " + path, 0, 0);
  return parse_matrix(in);
}

inline std::string format_entry(cplx v) {
  std::string s = format_double(v.real());
  if (v.imag() != 0.0) {
    const std::string im = format_double(v.imag());
    s += (im.front() == '-' ? "" : "+") + im + "j";
  }
  return s;
}

inline std::string format_matrix(const Matrix &m) {
  std::ostringstream os;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << (c ? " " : "") << format_entry(m(r, c));
    os << "\n";
  }
  return os.str();
}

} // namespace schmidt::io
