// Serialization of visibility fields and binary masks.
//
// Two on-disk forms:
//   - PGM (P5), for golden-image comparison and quick viewing: field values
//     are clamped to [0,1], scaled by 255 and rounded; masks map to 0/255.
//   - a flat binary format for exact regression tests: a 16-byte header
//     (8-byte magic, then width and height as little-endian uint32) followed
//     by the row-major payload. Fields store little-endian IEEE 754 doubles
//     ("GVISFLD1"), masks store one byte per cell ("GVISMSK1").

#pragma once

#include <array>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "gridvis/grid.hpp"
#include "gridvis/visibility.hpp"

namespace gridvis {

inline constexpr char field_magic[8] = {'G', 'V', 'I', 'S', 'F', 'L', 'D', '1'};
inline constexpr char mask_magic[8] = {'G', 'V', 'I', 'S', 'M', 'S', 'K', '1'};

namespace detail {

inline void put_u32_le(std::ostream& out, uint32_t v) {
  const char bytes[4] = {char(v & 0xff), char((v >> 8) & 0xff), char((v >> 16) & 0xff),
                         char((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

inline uint32_t get_u32_le(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return uint32_t(b[0]) | uint32_t(b[1]) << 8 | uint32_t(b[2]) << 16 | uint32_t(b[3]) << 24;
}

inline void put_f64_le(std::ostream& out, double v) {
  uint64_t bits;
  std::memcpy(&bits, &v, 8);
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = char((bits >> (8 * i)) & 0xff);
  out.write(bytes, 8);
}

inline double get_f64_le(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= uint64_t(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

inline void read_header(std::istream& in, const char (&magic)[8], const std::string& name,
                        uint32_t& w, uint32_t& h) {
  char got[8];
  in.read(got, 8);
  if (!in || std::memcmp(got, magic, 8) != 0)
    throw std::runtime_error(name + ": bad magic");
  w = get_u32_le(in);
  h = get_u32_le(in);
  if (!in || w == 0 || h == 0) throw std::runtime_error(name + ": bad dimensions");
}

}  // namespace detail

inline void save_field(const VisibilityField& f, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(field_magic, 8);
  detail::put_u32_le(out, uint32_t(f.width));
  detail::put_u32_le(out, uint32_t(f.height));
  for (double v : f.values) detail::put_f64_le(out, v);
}

inline VisibilityField load_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  uint32_t w, h;
  detail::read_header(in, field_magic, path.string(), w, h);
  VisibilityField f(int(w), int(h));
  for (double& v : f.values) v = detail::get_f64_le(in);
  if (!in) throw std::runtime_error(path.string() + ": truncated payload");
  return f;
}

inline void save_mask(const BinaryMask& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(mask_magic, 8);
  detail::put_u32_le(out, uint32_t(m.width()));
  detail::put_u32_le(out, uint32_t(m.height()));
  out.write(reinterpret_cast<const char*>(m.bits().data()), std::streamsize(m.cell_count()));
}

inline BinaryMask load_mask(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  uint32_t w, h;
  detail::read_header(in, mask_magic, path.string(), w, h);
  BinaryMask m(int(w), int(h));
  for (uint32_t y = 0; y < h; ++y)
    for (uint32_t x = 0; x < w; ++x) {
      char b;
      in.get(b);
      m.set(int(x), int(y), b != 0);
    }
  if (!in) throw std::runtime_error(path.string() + ": truncated payload");
  return m;
}

inline void save_field_pgm(const VisibilityField& f, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "P5\n" << f.width << " " << f.height << "\n255\n";
  std::vector<unsigned char> raw(f.values.size());
  for (size_t i = 0; i < raw.size(); ++i)
    raw[i] = static_cast<unsigned char>(std::lround(std::clamp(f.values[i], 0.0, 1.0) * 255.0));
  out.write(reinterpret_cast<const char*>(raw.data()), std::streamsize(raw.size()));
}

inline void save_mask_pgm(const BinaryMask& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "P5\n" << m.width() << " " << m.height() << "\n255\n";
  std::vector<unsigned char> raw(m.cell_count());
  auto bits = m.bits();
  for (size_t i = 0; i < raw.size(); ++i) raw[i] = bits[i] ? 255 : 0;
  out.write(reinterpret_cast<const char*>(raw.data()), std::streamsize(raw.size()));
}

}  // namespace gridvis
