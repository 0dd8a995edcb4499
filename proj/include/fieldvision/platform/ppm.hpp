/**
 * @file ppm.hpp
 *
 * Binary PPM (P6, maxval 255) frame files. YCbCr triples are stored in the
 * R, G, B slots in that order.
 */

#pragma once

#include <cctype>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

#include "fieldvision/core/types.hpp"

namespace fv::platform {

class FrameReadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FrameFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::vector<std::uint8_t> encode_ppm(const Frame& frame) {
  const std::string header = "P6\n" + std::to_string(frame.width()) + " " +
                             std::to_string(frame.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(header.size() + frame.pixels().size() * 3);
  for (const Pixel& p : frame.pixels()) {
    out.push_back(p.y);
    out.push_back(p.cb);
    out.push_back(p.cr);
  }
  return out;
}

inline Frame decode_ppm(const std::vector<std::uint8_t>& bytes, const std::string& label) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) {
    return FrameFormatError(label + ": " + why);
  };
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&]() -> long {
    skip_space();
    long v = 0;
    std::size_t digits = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos]) && digits < 9) {
      v = v * 10 + (bytes[pos] - '0');
      ++pos;
      ++digits;
    }
    if (digits == 0) throw fail("malformed PPM header");
    return v;
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') throw fail("not a binary PPM (P6)");
  pos = 2;
  const long w = read_int();
  const long h = read_int();
  const long maxval = read_int();
  if (maxval != 255) throw fail("maxval must be 255, got " + std::to_string(maxval));
  if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw fail("malformed PPM header");
  ++pos;
  if (w < 2 || h < 2) throw fail("frame must be at least 2x2");
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (bytes.size() - pos != n * 3)
    throw fail("pixel payload is " + std::to_string(bytes.size() - pos) + " bytes, expected " +
               std::to_string(n * 3));
  std::vector<Pixel> pixels(n);
  for (std::size_t i = 0; i < n; ++i)
    pixels[i] = {bytes[pos + 3 * i], bytes[pos + 3 * i + 1], bytes[pos + 3 * i + 2]};
  return Frame(static_cast<int>(w), static_cast<int>(h), std::move(pixels));
}

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FrameReadError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw FrameReadError("read failed for " + path.string());
  return bytes;
}

inline void write_file_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FrameReadError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FrameReadError("write failed for " + path.string());
}

inline Frame read_ppm(const std::filesystem::path& path) {
  return decode_ppm(read_file_bytes(path), path.string());
}

inline void write_ppm(const std::filesystem::path& path, const Frame& frame) {
  write_file_bytes(path, encode_ppm(frame));
}

}  // namespace fv::platform
