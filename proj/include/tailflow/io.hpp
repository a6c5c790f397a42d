#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "tailflow/types.hpp"

namespace tailflow {

/// Little-endian binary stream helpers shared by the checkpoint, dataset
/// cache, and IDX readers. Offsets are tracked so parse errors can name the
/// exact byte.
class BinaryWriter {
 public:
  explicit BinaryWriter(const std::string& path)
      : f_(path, std::ios::binary | std::ios::trunc) {
    if (!f_) throw DataError("cannot open for writing: " + path);
  }
  void u8(std::uint8_t v) { put(&v, 1); }
  void u32(std::uint32_t v) {
    std::uint8_t b[4] = {static_cast<std::uint8_t>(v),
                         static_cast<std::uint8_t>(v >> 8),
                         static_cast<std::uint8_t>(v >> 16),
                         static_cast<std::uint8_t>(v >> 24)};
    put(b, 4);
  }
  void u64(std::uint64_t v) {
    u32(static_cast<std::uint32_t>(v));
    u32(static_cast<std::uint32_t>(v >> 32));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void f64_array(const double* p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) f64(p[i]);
  }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    put(s.data(), s.size());
  }
  void bytes(const void* p, std::size_t n) { put(p, n); }

 private:
  void put(const void* p, std::size_t n) {
    f_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    if (!f_) throw DataError("write failure");
  }
  std::ofstream f_;
};

class BinaryReader {
 public:
  explicit BinaryReader(const std::string& path)
      : f_(path, std::ios::binary), path_(path) {
    if (!f_) throw DataError("cannot open: " + path);
  }
  std::int64_t offset() const { return offset_; }

  std::uint8_t u8() {
    std::uint8_t v;
    get(&v, 1);
    return v;
  }
  std::uint32_t u32() {
    std::uint8_t b[4];
    get(b, 4);
    return static_cast<std::uint32_t>(b[0]) |
           (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
  }
  std::uint64_t u64() {
    const std::uint64_t lo = u32();
    return lo | (static_cast<std::uint64_t>(u32()) << 32);
  }
  double f64() { return std::bit_cast<double>(u64()); }
  void f64_array(double* p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) p[i] = f64();
  }
  std::string str() {
    const std::uint32_t n = u32();
    std::string s(n, '\0');
    get(s.data(), n);
    return s;
  }
  void bytes(void* p, std::size_t n) { get(p, n); }

  void expect_magic(const char (&magic)[5]) {
    char buf[4];
    get(buf, 4);
    if (std::memcmp(buf, magic, 4) != 0)
      throw DataError(path_ + ": bad magic at byte 0", 0);
  }

 private:
  void get(void* p, std::size_t n) {
    f_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(f_.gcount()) != n)
      throw DataError(path_ + ": truncated at byte " + std::to_string(offset_),
                      offset_);
    offset_ += static_cast<std::int64_t>(n);
  }
  std::ifstream f_;
  std::string path_;
  std::int64_t offset_ = 0;
};

}  // namespace tailflow
