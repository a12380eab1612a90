#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pcfgc/errors.hpp"

namespace pcfgc {

// Unsigned LEB128.
inline void write_varint(std::vector<uint8_t>& out, uint64_t v) {
  do {
    uint8_t b = v & 0x7F;
    v >>= 7;
    if (v != 0) b |= 0x80;
    out.push_back(b);
  } while (v != 0);
}

// Bounds-checked cursor over a byte span; all reads throw MalformedBytes on
// overrun.
class ByteReader {
 public:
  explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

  uint8_t byte() {
    if (pos_ >= data_.size()) throw MalformedBytes("unexpected end of input");
    return data_[pos_++];
  }

  uint64_t varint() {
    uint64_t v = 0;
    for (unsigned shift = 0;; shift += 7) {
      if (shift >= 64) throw MalformedBytes("varint too long");
      const uint8_t b = byte();
      v |= uint64_t(b & 0x7F) << shift;
      if ((b & 0x80) == 0) break;
    }
    return v;
  }

  std::span<const uint8_t> bytes(size_t n) {
    if (n > data_.size() - pos_) throw MalformedBytes("unexpected end of input");
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  size_t position() const { return pos_; }
  bool at_end() const { return pos_ == data_.size(); }

 private:
  std::span<const uint8_t> data_;
  size_t pos_ = 0;
};

}  // namespace pcfgc
