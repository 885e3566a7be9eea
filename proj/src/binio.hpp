#pragma once

// Little-endian binary readers/writers for the model containers.
// Byte order is explicit so files are portable across hosts.

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "korpus/error.hpp"

namespace korpus::detail {

inline void write_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 4);
}

inline void write_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 8);
}

inline void write_f64(std::ostream& out, double v) { write_u64(out, std::bit_cast<std::uint64_t>(v)); }

inline void write_string(std::ostream& out, std::string_view s) {
  write_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::uint32_t read_u32(std::istream& in, const std::string& what) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) raise(Errc::FormatError, "truncated " + what);
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

inline std::uint64_t read_u64(std::istream& in, const std::string& what) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) raise(Errc::FormatError, "truncated " + what);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

inline double read_f64(std::istream& in, const std::string& what) {
  return std::bit_cast<double>(read_u64(in, what));
}

inline std::string read_string(std::istream& in, const std::string& what) {
  const std::uint32_t len = read_u32(in, what);
  std::string s(len, '\0');
  if (!in.read(s.data(), len)) raise(Errc::FormatError, "truncated " + what);
  return s;
}

inline void expect_magic(std::istream& in, std::string_view magic, const std::string& what) {
  std::string got(magic.size(), '\0');
  if (!in.read(got.data(), static_cast<std::streamsize>(magic.size())) || got != magic) {
    raise(Errc::FormatError, what + ": bad magic");
  }
}

// Bulk float blocks; one buffered read/write instead of millions.

inline void write_f32_block(std::ostream& out, const std::vector<float>& block) {
  std::vector<char> bytes(block.size() * 4);
  for (std::size_t i = 0; i < block.size(); ++i) {
    const auto v = std::bit_cast<std::uint32_t>(block[i]);
    for (int k = 0; k < 4; ++k) bytes[i * 4 + static_cast<std::size_t>(k)] = static_cast<char>((v >> (8 * k)) & 0xFF);
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

inline void read_f32_block(std::istream& in, std::vector<float>& block, const std::string& what) {
  std::vector<unsigned char> bytes(block.size() * 4);
  if (!in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()))) {
    raise(Errc::FormatError, "truncated " + what);
  }
  for (std::size_t i = 0; i < block.size(); ++i) {
    std::uint32_t v = 0;
    for (int k = 3; k >= 0; --k) v = (v << 8) | bytes[i * 4 + static_cast<std::size_t>(k)];
    block[i] = std::bit_cast<float>(v);
  }
}

inline void write_f64_block(std::ostream& out, const std::vector<double>& block) {
  std::vector<char> bytes(block.size() * 8);
  for (std::size_t i = 0; i < block.size(); ++i) {
    const auto v = std::bit_cast<std::uint64_t>(block[i]);
    for (int k = 0; k < 8; ++k) bytes[i * 8 + static_cast<std::size_t>(k)] = static_cast<char>((v >> (8 * k)) & 0xFF);
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

inline void read_f64_block(std::istream& in, std::vector<double>& block, const std::string& what) {
  std::vector<unsigned char> bytes(block.size() * 8);
  if (!in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()))) {
    raise(Errc::FormatError, "truncated " + what);
  }
  for (std::size_t i = 0; i < block.size(); ++i) {
    std::uint64_t v = 0;
    for (int k = 7; k >= 0; --k) v = (v << 8) | bytes[i * 8 + static_cast<std::size_t>(k)];
    block[i] = std::bit_cast<double>(v);
  }
}

}  // namespace korpus::detail
