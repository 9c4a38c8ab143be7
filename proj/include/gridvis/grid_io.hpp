// Occupancy grid file I/O.
//
// Two interchange formats:
//   - PGM, both ASCII (P2) and binary (P5) accepted on load; P5 with maxval
//     255 emitted on save. Pixel p maps to occupancy 1 - p/maxval, so white
//     is free space and dark is blocked.
//   - plain text mazes: one row per line, '.' = free, '#' = blocked,
//     digits '0'..'9' = partial occupancy d/9.

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gridvis/grid.hpp"

namespace gridvis {

// Parse failure with the location that caused it.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& file, long line, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
        line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

enum class GridFormat { pgm, plain_text };

namespace detail {

// Reads PGM header tokens, skipping whitespace and '#' comments, tracking the
// current line for error reporting.
class PgmTokenizer {
 public:
  PgmTokenizer(std::istream& in, const std::string& name) : in_(in), name_(name) {}

  std::string next_token() {
    skip_space_and_comments();
    std::string tok;
    int c;
    while ((c = in_.peek()) != EOF && !std::isspace(c)) {
      tok.push_back(char(in_.get()));
    }
    if (tok.empty()) throw ParseError(name_, line_, "unexpected end of header");
    return tok;
  }

  long parse_uint(const std::string& what, long max_value) {
    const std::string tok = next_token();
    long v = 0;
    for (char ch : tok) {
      if (!std::isdigit(static_cast<unsigned char>(ch)))
        throw ParseError(name_, line_, "malformed " + what + " '" + tok + "'");
      v = v * 10 + (ch - '0');
      if (v > max_value) throw ParseError(name_, line_, what + " out of range: " + tok);
    }
    return v;
  }

  long parse_positive_int(const std::string& what, long max_value) {
    const long v = parse_uint(what, max_value);
    if (v <= 0) throw ParseError(name_, line_, what + " must be positive");
    return v;
  }

  // Consumes the single whitespace byte that separates the header from a P5
  // payload.
  void consume_payload_separator() {
    const int c = in_.get();
    if (c == EOF || !std::isspace(c)) throw ParseError(name_, line_, "missing payload separator");
    if (c == '\n') ++line_;
  }

  long line() const noexcept { return line_; }

 private:
  void skip_space_and_comments() {
    int c;
    while ((c = in_.peek()) != EOF) {
      if (c == '#') {
        while ((c = in_.get()) != EOF && c != '\n') {
        }
        ++line_;
      } else if (std::isspace(c)) {
        if (in_.get() == '\n') ++line_;
      } else {
        break;
      }
    }
  }

  std::istream& in_;
  std::string name_;
  long line_ = 1;
};

}  // namespace detail

inline OccupancyGrid load_pgm(std::istream& in, const std::string& name) {
  detail::PgmTokenizer tok(in, name);
  const std::string magic = tok.next_token();
  if (magic != "P2" && magic != "P5")
    throw ParseError(name, tok.line(), "not a PGM file (magic '" + magic + "')");

  const long width = tok.parse_positive_int("width", 1 << 20);
  const long height = tok.parse_positive_int("height", 1 << 20);
  const long maxval = tok.parse_positive_int("maxval", 65535);

  const size_t n = size_t(width) * size_t(height);
  std::vector<double> cells(n);

  if (magic == "P2") {
    for (size_t i = 0; i < n; ++i) {
      const long v = tok.parse_uint("sample", maxval);
      cells[i] = 1.0 - double(v) / double(maxval);
    }
  } else {
    tok.consume_payload_separator();
    const int bytes_per_sample = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(n * bytes_per_sample);
    in.read(reinterpret_cast<char*>(raw.data()), std::streamsize(raw.size()));
    if (size_t(in.gcount()) != raw.size())
      throw ParseError(name, tok.line(),
                       "truncated pixel data: expected " + std::to_string(raw.size()) +
                           " bytes, got " + std::to_string(in.gcount()));
    for (size_t i = 0; i < n; ++i) {
      long v;
      if (bytes_per_sample == 1) {
        v = raw[i];
      } else {
        v = long(raw[2 * i]) << 8 | raw[2 * i + 1];  // big-endian per Netpbm
      }
      if (v > maxval)
        throw ParseError(name, tok.line(),
                         "sample " + std::to_string(v) + " exceeds maxval at offset " + std::to_string(i));
      cells[i] = 1.0 - double(v) / double(maxval);
    }
  }
  return OccupancyGrid(int(width), int(height), std::move(cells));
}

inline OccupancyGrid load_plain_text(std::istream& in, const std::string& name) {
  std::vector<double> cells;
  long width = -1;
  long line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (width < 0) {
      width = long(line.size());
    } else if (long(line.size()) != width) {
      throw ParseError(name, line_no,
                       "row length " + std::to_string(line.size()) + " differs from first row (" +
                           std::to_string(width) + ")");
    }
    for (size_t col = 0; col < line.size(); ++col) {
      const char c = line[col];
      if (c == '.') {
        cells.push_back(0.0);
      } else if (c == '#') {
        cells.push_back(1.0);
      } else if (c >= '0' && c <= '9') {
        cells.push_back(double(c - '0') / 9.0);
      } else {
        throw ParseError(name, line_no,
                         std::string("invalid character '") + c + "' at column " + std::to_string(col + 1));
      }
    }
  }
  if (width <= 0) throw ParseError(name, line_no, "no grid rows found");
  const long height = long(cells.size()) / width;
  return OccupancyGrid(int(width), int(height), std::move(cells));
}

inline OccupancyGrid load_occupancy(const std::filesystem::path& path, GridFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  switch (format) {
    case GridFormat::pgm:
      return load_pgm(in, path.string());
    case GridFormat::plain_text:
      return load_plain_text(in, path.string());
  }
  throw std::logic_error("unreachable");
}

// Picks the format from the file extension: .pgm -> PGM, anything else text.
inline OccupancyGrid load_occupancy(const std::filesystem::path& path) {
  return load_occupancy(path, path.extension() == ".pgm" ? GridFormat::pgm : GridFormat::plain_text);
}

inline void save_pgm(const OccupancyGrid& grid, std::ostream& out) {
  out << "P5\n" << grid.width() << " " << grid.height() << "\n255\n";
  std::vector<unsigned char> raw(grid.cell_count());
  auto cells = grid.cells();
  for (size_t i = 0; i < raw.size(); ++i)
    raw[i] = static_cast<unsigned char>(std::lround((1.0 - cells[i]) * 255.0));
  out.write(reinterpret_cast<const char*>(raw.data()), std::streamsize(raw.size()));
}

inline void save_pgm(const OccupancyGrid& grid, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  save_pgm(grid, out);
}

inline void save_plain_text(const OccupancyGrid& grid, std::ostream& out) {
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      const double v = grid.at(x, y);
      if (v <= 0.0) {
        out << '.';
      } else if (v >= 1.0) {
        out << '#';
      } else {
        const int d = std::clamp(int(std::lround(v * 9.0)), 1, 8);
        out << char('0' + d);
      }
    }
    out << '\n';
  }
}

inline void save_plain_text(const OccupancyGrid& grid, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  save_plain_text(grid, out);
}

}  // namespace gridvis
