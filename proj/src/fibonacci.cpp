#include "pcfgc/fibonacci.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "pcfgc/rng.hpp"

namespace pcfgc {

namespace {

constexpr unsigned kMaxNoiseLetters = 153;  // 'c' + 152 is the last byte value
constexpr uint64_t kMaxTextLength = 1ull << 30;

void check_k(unsigned k) {
  if (k > kMaxNoiseLetters)
    throw std::invalid_argument("at most 153 fresh noise letters fit the byte range");
}

}  // namespace

std::string fib_string(unsigned m) {
  if (m == 0) return "b";
  if (m == 1) return "a";
  if (fib_length(m) > kMaxTextLength) throw std::invalid_argument("fibonacci string too large");
  std::string prev = "b", cur = "a";
  for (unsigned i = 2; i <= m; ++i) {
    std::string next = cur + prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

uint64_t fib_length(unsigned m) {
  if (m > 87) throw std::invalid_argument("fibonacci length overflows 64 bits");
  uint64_t prev = 1, cur = 1;  // |Fib_0|, |Fib_1|
  for (unsigned i = 2; i <= m; ++i) {
    const uint64_t next = cur + prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

Grammar fibonacci_slp(unsigned m) {
  if (m < 2) throw std::invalid_argument("fibonacci_slp needs m >= 2");
  Grammar g;
  const uint32_t tb = g.add_terminal('b');
  const uint32_t ta = g.add_terminal('a');
  const uint32_t v0 = g.add_nonterminal();
  g.add_rule(v0, {Symbol::terminal(tb)});
  const uint32_t v1 = g.add_nonterminal();
  g.add_rule(v1, {Symbol::terminal(ta)});
  for (unsigned i = 2; i <= m; ++i) {
    const uint32_t vi = g.add_nonterminal();
    g.add_rule(vi, {Symbol::nonterminal(vi - 1), Symbol::nonterminal(vi - 2)});
  }
  g.set_start({Symbol::nonterminal(m)});
  return g;
}

uint8_t noise_letter(unsigned j) {
  if (j < 1) throw std::invalid_argument("noise letters are 1-based");
  check_k(j);
  return static_cast<uint8_t>('c' + (j - 1));
}

NoisyFibText add_noise(unsigned m, const NoiseSpec& noise) {
  if (!(noise.ratio >= 0.0 && noise.ratio <= 1.0))
    throw RatioOutOfRange("noise ratio must lie in [0, 1]");
  check_k(noise.k);

  NoisyFibText out;
  out.m = m;
  out.noise = noise;
  out.text = fib_string(m);

  const size_t n = out.text.size();
  const auto count = static_cast<size_t>(std::llround(noise.ratio * static_cast<double>(n)));

  std::mt19937_64 rng(noise.seed);
  std::vector<uint32_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0u);
  for (size_t i = 0; i < count; ++i) {
    const size_t j = i + static_cast<size_t>(draw_below(rng, n - i));
    std::swap(idx[i], idx[j]);
  }
  out.altered_positions.assign(idx.begin(), idx.begin() + count);
  std::sort(out.altered_positions.begin(), out.altered_positions.end());

  for (const uint32_t pos : out.altered_positions) {
    if (noise.k == 0) {
      out.text[pos] = out.text[pos] == 'a' ? 'b' : 'a';
    } else {
      const unsigned j = 1 + static_cast<unsigned>(draw_below(rng, noise.k));
      out.text[pos] = static_cast<char>(noise_letter(j));
    }
  }
  return out;
}

Pcfg fib_grammar_g0(unsigned m) {
  Grammar g = fibonacci_slp(m);
  g.add_rule(0, {Symbol::terminal(1)});  // v_0: clean b, flipped a
  g.add_rule(1, {Symbol::terminal(0)});  // v_1: clean a, flipped b
  return Pcfg::adaptive(std::move(g));
}

Pcfg fib_grammar_gk(unsigned m, unsigned k) {
  if (k < 1) throw std::invalid_argument("fib_grammar_gk needs k >= 1");
  check_k(k);
  Grammar g = fibonacci_slp(m);
  for (unsigned j = 1; j <= k; ++j) {
    const uint32_t t = g.add_terminal(noise_letter(j));
    g.add_rule(0, {Symbol::terminal(t)});
    g.add_rule(1, {Symbol::terminal(t)});
  }
  return Pcfg::adaptive(std::move(g));
}

ChoiceSequence extract_choices(std::string_view text, unsigned m, unsigned k) {
  check_k(k);
  const std::string clean = fib_string(m);
  if (text.size() != clean.size())
    throw LengthMismatch("text length does not match the fibonacci string");

  ChoiceSequence out;
  out.values.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == clean[i]) {
      out.values.push_back(0);
    } else if (k == 0) {
      const bool flip = (clean[i] == 'a' && c == 'b') || (clean[i] == 'b' && c == 'a');
      if (!flip) throw IllegalLetter("letter is neither clean nor the flipped letter");
      out.values.push_back(1);
    } else {
      const unsigned j = static_cast<unsigned>(static_cast<uint8_t>(c)) - 'c' + 1;
      if (static_cast<uint8_t>(c) < 'c' || j > k)
        throw IllegalLetter("letter is neither clean nor a declared noise letter");
      out.values.push_back(j);
    }
  }
  return out;
}

ChoiceSequence extract_choices(const NoisyFibText& t) {
  return extract_choices(t.text, t.m, t.noise.k);
}

std::string reconstruct(unsigned m, unsigned k, const ChoiceSequence& choices) {
  check_k(k);
  std::string text = fib_string(m);
  if (choices.size() != text.size())
    throw LengthMismatch("choice count does not match the fibonacci string");
  for (size_t i = 0; i < text.size(); ++i) {
    const uint32_t v = choices.values[i];
    if (v == 0) continue;
    if (k == 0) {
      if (v != 1) throw ChoiceOutOfRange("flip noise admits choices 0 and 1 only");
      text[i] = text[i] == 'a' ? 'b' : 'a';
    } else {
      if (v > k) throw ChoiceOutOfRange("choice exceeds the declared letter count");
      text[i] = static_cast<char>(noise_letter(v));
    }
  }
  return text;
}

}  // namespace pcfgc
