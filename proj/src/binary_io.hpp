#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "pfs/errors.hpp"

namespace pfs::detail {

static_assert(std::endian::native == std::endian::little,
              "binary containers are written in little-endian byte order");

class ByteWriter {
 public:
  template <typename T>
  void put(T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    const auto* p = reinterpret_cast<const char*>(&value);
    bytes_.insert(bytes_.end(), p, p + sizeof(T));
  }
  void put_bytes(std::string_view raw) { bytes_.insert(bytes_.end(), raw.begin(), raw.end()); }
  void put_string(std::string_view s) {
    put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    put_bytes(s);
  }
  const std::vector<char>& bytes() const { return bytes_; }

 private:
  std::vector<char> bytes_;
};

class ByteReader {
 public:
  ByteReader(const std::vector<char>& bytes, std::string what) : bytes_(bytes), what_(std::move(what)) {}

  template <typename T>
  T get() {
    static_assert(std::is_trivially_copyable_v<T>);
    need(sizeof(T));
    T value;
    std::memcpy(&value, bytes_.data() + offset_, sizeof(T));
    offset_ += sizeof(T);
    return value;
  }
  std::string get_bytes(std::size_t n) {
    need(n);
    std::string s(bytes_.data() + offset_, n);
    offset_ += n;
    return s;
  }
  std::string get_string(std::size_t max_length = 4096) {
    auto n = get<std::uint32_t>();
    if (n > max_length) fail("string length " + std::to_string(n) + " too large");
    return get_bytes(n);
  }
  void expect_magic(std::string_view magic) {
    if (get_bytes(magic.size()) != magic) {
      offset_ -= magic.size();
      fail("bad magic, expected \"" + std::string(magic) + "\"");
    }
  }
  std::size_t offset() const { return offset_; }
  std::size_t remaining() const { return bytes_.size() - offset_; }
  [[noreturn]] void fail(const std::string& message) const {
    throw FormatError(what_ + ": " + message + " at offset " + std::to_string(offset_));
  }

 private:
  void need(std::size_t n) {
    if (bytes_.size() - offset_ < n)
      fail("truncated: need " + std::to_string(n) + " bytes, " + std::to_string(remaining()) +
           " left");
  }

  const std::vector<char>& bytes_;
  std::string what_;
  std::size_t offset_ = 0;
};

std::vector<char> read_file(const std::string& path);
void write_file(const std::string& path, const std::vector<char>& bytes);

}  // namespace pfs::detail
