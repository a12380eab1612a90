#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pcfgc/grammar.hpp"
#include "pcfgc/range_coder.hpp"

namespace pcfgc {

// Compressed artifact layout: magic "PCFG1", one method byte, then a
// method-specific body (integers are LEB128 varints):
//
//   Repair      grammar section (see serialize.hpp)
//   PcfgRepair  grammar section, varint flag count, varint payload length,
//               payload (flags coded under an adaptive binary model)
//   FibG0       varint m, varint k (always 1 on the wire), varint payload
//               length, payload (choices under an adaptive binary model)
//   FibGk       varint m, varint k, varint payload length, payload (choices
//               under an adaptive (k+1)-ary model)
//   Unary       varint n, varint payload length, payload (the derivation of
//               a^n under a static model derived from n)
enum class Method : uint8_t {
  Repair = 0,
  PcfgRepair = 1,
  FibG0 = 2,
  FibGk = 3,
  Unary = 4,
};

struct CompressParams {
  unsigned m = 0;   // FibG0 / FibGk
  unsigned k = 0;   // FibGk
  uint64_t n = 0;   // Unary
};

struct CompressedArtifact {
  Method method = Method::Repair;
  uint64_t m = 0;
  uint64_t k = 0;           // wire value: 1 for FibG0, k for FibGk
  uint64_t n = 0;           // Unary
  uint64_t flag_count = 0;  // PcfgRepair
  std::vector<uint8_t> grammar_bytes;  // Repair / PcfgRepair
  std::vector<uint8_t> payload_bytes;

  std::vector<uint8_t> to_bytes() const;
  static CompressedArtifact from_bytes(std::span<const uint8_t> bytes);
  size_t total_size() const;

  friend bool operator==(const CompressedArtifact&, const CompressedArtifact&) = default;
};

// Compresses `text` with the given method. FibG0 needs params.m, FibGk
// params.m and params.k; Unary needs params.n and requires text == a^n.
CompressedArtifact compress(std::string_view text, Method method,
                            const CompressParams& params = {});
std::string decompress(const CompressedArtifact& artifact);
std::string decompress_bytes(std::span<const uint8_t> bytes);

// The two-rule grammar of a^n: S -> aS | a. Deriving a^n takes n choices,
// the first n-1 picking rule 0 and the last picking rule 1.
Grammar unary_grammar();
// Static model for those choices: P(stop) = 1/n.
FrequencyModel unary_model(uint64_t n);

CompressedArtifact unary_pcfg_compress(uint64_t n);
std::string unary_pcfg_decompress(const CompressedArtifact& artifact);

// Straight-line grammar for a^(2^m) by repeated doubling; the conventional
// baseline a grammar compressor would emit for that string.
Grammar doubling_slp(unsigned m);

}  // namespace pcfgc
