#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pcfgc/errors.hpp"

namespace pcfgc {

// Byte-oriented range coder, 32-bit low/range state. Renormalization emits
// the top byte whenever it can no longer change; pending carries are avoided
// by shrinking the range to the current 64K-aligned boundary instead of
// propagating them. Total frequency per step must stay <= 2^16.
class RangeEncoder {
 public:
  static constexpr uint32_t kMaxTotal = 1u << 16;

  // Narrows the interval to [cum, cum+freq) / total.
  void encode(uint32_t cum, uint32_t freq, uint32_t total);
  // Flushes the remaining state (4 bytes) and yields the stream.
  std::vector<uint8_t> finish();

 private:
  uint32_t low_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
  std::vector<uint8_t> out_;
};

class RangeDecoder {
 public:
  explicit RangeDecoder(std::span<const uint8_t> bytes);

  // Scales the code into [0, total); pass the result to a frequency model to
  // identify the symbol, then call decode_update with that symbol's band.
  uint32_t decode_freq(uint32_t total);
  void decode_update(uint32_t cum, uint32_t freq);

 private:
  uint8_t next_byte();

  std::span<const uint8_t> in_;
  size_t pos_ = 0;
  uint32_t low_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
  uint32_t code_ = 0;
};

// Symbol frequencies for the coder. Adaptive mode starts uniform (count 1
// per symbol), bumps the coded symbol by 32, and halves all counts (floor 1)
// when the total would pass 2^16. Static mode fixes the distribution up
// front from real-valued probabilities.
class FrequencyModel {
 public:
  struct Band {
    uint32_t cum;
    uint32_t freq;
  };

  static FrequencyModel adaptive(uint32_t alphabet_size);
  static FrequencyModel from_probabilities(std::vector<double> probs);

  uint32_t alphabet_size() const { return static_cast<uint32_t>(counts_.size()); }
  uint32_t total() const { return total_; }
  bool is_adaptive() const { return adaptive_; }
  // The stated real-valued distribution (static mode only; empty otherwise).
  const std::vector<double>& probabilities() const { return probs_; }

  Band band(uint32_t symbol) const;          // throws SymbolOutOfRange
  uint32_t symbol_for(uint32_t scaled) const;  // inverse of band over cum ranges
  void record(uint32_t symbol);              // adaptive update; no-op in static mode

 private:
  bool adaptive_ = true;
  std::vector<uint32_t> counts_;
  uint32_t total_ = 0;
  std::vector<double> probs_;
};

// Encodes/decodes a symbol sequence under `model` (passed by value: both
// sides must start from the same initial model state).
std::vector<uint8_t> rc_encode(std::span<const uint32_t> symbols, FrequencyModel model);
std::vector<uint32_t> rc_decode(std::span<const uint8_t> bytes, FrequencyModel model,
                                size_t count);

}  // namespace pcfgc
