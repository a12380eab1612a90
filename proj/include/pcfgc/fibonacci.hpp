#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pcfgc/grammar.hpp"

namespace pcfgc {

// Noise model applied to a Fibonacci string. k = 0 flips letters in place
// (a <-> b); k >= 1 replaces letters with one of k fresh letters c_1..c_k.
struct NoiseSpec {
  unsigned k = 0;
  double ratio = 0.0;
  uint64_t seed = 0;
};

struct NoisyFibText {
  unsigned m = 0;
  std::string text;
  NoiseSpec noise;
  std::vector<uint32_t> altered_positions;  // sorted, distinct
};

// Fib_0 = "b", Fib_1 = "a", Fib_m = Fib_{m-1} Fib_{m-2}.
std::string fib_string(unsigned m);
uint64_t fib_length(unsigned m);

// Straight-line grammar deriving Fib_m: v_0 -> b, v_1 -> a,
// v_i -> v_{i-1} v_{i-2}, start [v_m]. Requires m >= 2.
Grammar fibonacci_slp(unsigned m);

// Byte for the j-th fresh noise letter: 'c', 'd', ... (1-based, j <= 153).
uint8_t noise_letter(unsigned j);

// Applies `noise` to Fib_m at round(ratio * |Fib_m|) distinct positions,
// deterministically in (m, noise). Draw order: positions first (partial
// Fisher-Yates), then for k >= 1 one letter per altered position in
// ascending position order.
NoisyFibText add_noise(unsigned m, const NoiseSpec& noise);

// The Fibonacci grammar made ambiguous at its leaves. g0 adds the flipped
// letter as a second rule on each leaf head; gk adds the k fresh letters as
// rules 1..k on both leaf heads. Choice 0 is always the clean letter.
// Adaptive probability mode; requires m >= 2 (and 1 <= k <= 153 for gk).
Pcfg fib_grammar_g0(unsigned m);
Pcfg fib_grammar_gk(unsigned m, unsigned k);

// Position-wise comparison against the clean Fib_m: entry i is 0 where the
// text matches, otherwise the index of the replacement letter (1 for a flip
// when k = 0, j for letter c_j when k >= 1). Equals the choice sequence of
// the text's left-most derivation under the matching leaf-ambiguous grammar.
ChoiceSequence extract_choices(std::string_view text, unsigned m, unsigned k);
ChoiceSequence extract_choices(const NoisyFibText& t);

// Inverse of extract_choices; equals expanding the matching grammar with
// `choices` (k = 0 selects the flip grammar, k >= 1 the k-letter grammar).
std::string reconstruct(unsigned m, unsigned k, const ChoiceSequence& choices);

}  // namespace pcfgc
