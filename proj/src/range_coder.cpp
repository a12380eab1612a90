#include "pcfgc/range_coder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pcfgc {

namespace {

constexpr uint32_t kTop = 1u << 24;
constexpr uint32_t kBot = 1u << 16;
constexpr uint32_t kStaticTotal = 1u << 16;
constexpr uint32_t kMaxAlphabet = 4096;
constexpr uint32_t kAdaptiveIncrement = 32;

}  // namespace

void RangeEncoder::encode(uint32_t cum, uint32_t freq, uint32_t total) {
  if (total == 0 || total > kMaxTotal || freq == 0 || cum + freq > total)
    throw std::invalid_argument("bad coder band");
  range_ /= total;
  low_ += cum * range_;
  range_ *= freq;
  // Emit settled top bytes; when the interval straddles a carry boundary and
  // is already small, clip it to the boundary instead of tracking the carry.
  while ((low_ ^ (low_ + range_)) < kTop ||
         (range_ < kBot && ((range_ = -low_ & (kBot - 1)), true))) {
    out_.push_back(static_cast<uint8_t>(low_ >> 24));
    low_ <<= 8;
    range_ <<= 8;
  }
}

std::vector<uint8_t> RangeEncoder::finish() {
  for (int i = 0; i < 4; ++i) {
    out_.push_back(static_cast<uint8_t>(low_ >> 24));
    low_ <<= 8;
  }
  return std::move(out_);
}

RangeDecoder::RangeDecoder(std::span<const uint8_t> bytes) : in_(bytes) {
  for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | next_byte();
}

uint8_t RangeDecoder::next_byte() {
  if (pos_ >= in_.size()) throw TruncatedStream("coder input ended early");
  return in_[pos_++];
}

uint32_t RangeDecoder::decode_freq(uint32_t total) {
  if (total == 0 || total > RangeEncoder::kMaxTotal)
    throw std::invalid_argument("bad coder total");
  range_ /= total;
  const uint32_t v = (code_ - low_) / range_;
  return v < total ? v : total - 1;
}

void RangeDecoder::decode_update(uint32_t cum, uint32_t freq) {
  low_ += cum * range_;
  range_ *= freq;
  while ((low_ ^ (low_ + range_)) < kTop ||
         (range_ < kBot && ((range_ = -low_ & (kBot - 1)), true))) {
    code_ = (code_ << 8) | next_byte();
    low_ <<= 8;
    range_ <<= 8;
  }
}

FrequencyModel FrequencyModel::adaptive(uint32_t alphabet_size) {
  if (alphabet_size < 2 || alphabet_size > kMaxAlphabet)
    throw std::invalid_argument("adaptive alphabet size out of range");
  FrequencyModel m;
  m.adaptive_ = true;
  m.counts_.assign(alphabet_size, 1);
  m.total_ = alphabet_size;
  return m;
}

FrequencyModel FrequencyModel::from_probabilities(std::vector<double> probs) {
  const size_t n = probs.size();
  if (n < 2 || n > kMaxAlphabet)
    throw std::invalid_argument("static alphabet size out of range");
  double sum = 0.0;
  for (const double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("bad probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) throw std::invalid_argument("probabilities must sum to 1");

  // Quantize to a fixed 2^16 total by largest remainder, then force every
  // symbol to at least one count so nothing becomes uncodable.
  FrequencyModel m;
  m.adaptive_ = false;
  m.counts_.assign(n, 0);
  std::vector<double> remainder(n);
  uint64_t assigned = 0;
  for (size_t i = 0; i < n; ++i) {
    const double scaled = probs[i] * kStaticTotal;
    const auto f = static_cast<uint32_t>(std::min(scaled, double(kStaticTotal)));
    m.counts_[i] = f;
    remainder[i] = scaled - f;
    assigned += f;
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return remainder[a] > remainder[b]; });
  for (size_t i = 0; assigned < kStaticTotal; ++i, ++assigned) ++m.counts_[order[i % n]];
  for (size_t i = 0; i < n; ++i) {
    while (m.counts_[i] == 0) {
      const size_t donor = static_cast<size_t>(
          std::max_element(m.counts_.begin(), m.counts_.end()) - m.counts_.begin());
      --m.counts_[donor];
      ++m.counts_[i];
    }
  }
  m.total_ = kStaticTotal;
  m.probs_ = std::move(probs);
  return m;
}

FrequencyModel::Band FrequencyModel::band(uint32_t symbol) const {
  if (symbol >= counts_.size()) throw SymbolOutOfRange("symbol outside the model alphabet");
  uint32_t cum = 0;
  for (uint32_t i = 0; i < symbol; ++i) cum += counts_[i];
  return {cum, counts_[symbol]};
}

uint32_t FrequencyModel::symbol_for(uint32_t scaled) const {
  uint32_t cum = 0;
  for (uint32_t i = 0; i < counts_.size(); ++i) {
    cum += counts_[i];
    if (scaled < cum) return i;
  }
  return static_cast<uint32_t>(counts_.size() - 1);
}

void FrequencyModel::record(uint32_t symbol) {
  if (symbol >= counts_.size()) throw SymbolOutOfRange("symbol outside the model alphabet");
  if (!adaptive_) return;
  counts_[symbol] += kAdaptiveIncrement;
  total_ += kAdaptiveIncrement;
  while (total_ > RangeEncoder::kMaxTotal) {
    total_ = 0;
    for (uint32_t& c : counts_) {
      c = std::max(1u, c >> 1);
      total_ += c;
    }
  }
}

std::vector<uint8_t> rc_encode(std::span<const uint32_t> symbols, FrequencyModel model) {
  RangeEncoder enc;
  for (const uint32_t s : symbols) {
    const auto band = model.band(s);
    enc.encode(band.cum, band.freq, model.total());
    model.record(s);
  }
  return enc.finish();
}

std::vector<uint32_t> rc_decode(std::span<const uint8_t> bytes, FrequencyModel model,
                                size_t count) {
  std::vector<uint32_t> out;
  out.reserve(count);
  if (count == 0) return out;
  RangeDecoder dec(bytes);
  for (size_t i = 0; i < count; ++i) {
    const uint32_t s = model.symbol_for(dec.decode_freq(model.total()));
    const auto band = model.band(s);
    dec.decode_update(band.cum, band.freq);
    model.record(s);
    out.push_back(s);
  }
  return out;
}

}  // namespace pcfgc
