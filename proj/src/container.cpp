#include "pcfgc/container.hpp"

#include <array>
#include <stdexcept>

#include "pcfgc/fibonacci.hpp"
#include "pcfgc/repair.hpp"
#include "pcfgc/serialize.hpp"
#include "pcfgc/varint.hpp"

namespace pcfgc {

namespace {

constexpr std::array<uint8_t, 5> kMagic{'P', 'C', 'F', 'G', '1'};
constexpr uint64_t kMaxOutput = 1ull << 30;

std::vector<uint32_t> to_symbols(const ChoiceSequence& c) {
  return c.values;
}

}  // namespace

std::vector<uint8_t> CompressedArtifact::to_bytes() const {
  std::vector<uint8_t> out(kMagic.begin(), kMagic.end());
  out.push_back(static_cast<uint8_t>(method));
  switch (method) {
    case Method::Repair:
      out.insert(out.end(), grammar_bytes.begin(), grammar_bytes.end());
      break;
    case Method::PcfgRepair:
      out.insert(out.end(), grammar_bytes.begin(), grammar_bytes.end());
      write_varint(out, flag_count);
      write_varint(out, payload_bytes.size());
      out.insert(out.end(), payload_bytes.begin(), payload_bytes.end());
      break;
    case Method::FibG0:
    case Method::FibGk:
      write_varint(out, m);
      write_varint(out, k);
      write_varint(out, payload_bytes.size());
      out.insert(out.end(), payload_bytes.begin(), payload_bytes.end());
      break;
    case Method::Unary:
      write_varint(out, n);
      write_varint(out, payload_bytes.size());
      out.insert(out.end(), payload_bytes.begin(), payload_bytes.end());
      break;
  }
  return out;
}

CompressedArtifact CompressedArtifact::from_bytes(std::span<const uint8_t> bytes) {
  ByteReader in(bytes);
  for (const uint8_t expected : kMagic)
    if (in.byte() != expected) throw MalformedBytes("bad magic");
  const uint8_t method_byte = in.byte();
  if (method_byte > static_cast<uint8_t>(Method::Unary))
    throw MethodMismatch("unknown method byte");

  CompressedArtifact art;
  art.method = static_cast<Method>(method_byte);
  switch (art.method) {
    case Method::Repair:
    case Method::PcfgRepair: {
      const size_t begin = in.position();
      read_grammar_section(in);  // validates; raw bytes are kept verbatim
      art.grammar_bytes.assign(bytes.begin() + begin, bytes.begin() + in.position());
      if (art.method == Method::PcfgRepair) {
        art.flag_count = in.varint();
        const uint64_t len = in.varint();
        const auto payload = in.bytes(len);
        art.payload_bytes.assign(payload.begin(), payload.end());
      }
      break;
    }
    case Method::FibG0:
    case Method::FibGk: {
      art.m = in.varint();
      if (art.m < 2 || art.m > 87)
        throw MalformedBytes("fibonacci index out of range");
      art.k = in.varint();
      if (art.method == Method::FibG0 && art.k != 1)
        throw MalformedBytes("flip-noise header must store k = 1");
      if (art.method == Method::FibGk && (art.k < 1 || art.k > 153))
        throw MalformedBytes("letter count out of range");
      const uint64_t len = in.varint();
      const auto payload = in.bytes(len);
      art.payload_bytes.assign(payload.begin(), payload.end());
      break;
    }
    case Method::Unary: {
      art.n = in.varint();
      if (art.n == 0) throw MalformedBytes("unary length must be positive");
      const uint64_t len = in.varint();
      const auto payload = in.bytes(len);
      art.payload_bytes.assign(payload.begin(), payload.end());
      break;
    }
  }
  if (!in.at_end()) throw MalformedBytes("trailing bytes after artifact");
  return art;
}

size_t CompressedArtifact::total_size() const { return to_bytes().size(); }

CompressedArtifact compress(std::string_view text, Method method,
                            const CompressParams& params) {
  CompressedArtifact art;
  art.method = method;
  switch (method) {
    case Method::Repair:
      art.grammar_bytes = serialize_grammar(repair_classic(text));
      break;
    case Method::PcfgRepair: {
      const RepairPcfgResult result = repair_pcfg(text);
      art.grammar_bytes = serialize_grammar(result.grammar);
      art.flag_count = result.flags.size();
      art.payload_bytes = rc_encode(to_symbols(result.flags), FrequencyModel::adaptive(2));
      break;
    }
    case Method::FibG0: {
      if (params.m < 2) throw std::invalid_argument("fib methods need m >= 2");
      const ChoiceSequence choices = extract_choices(text, params.m, 0);
      art.m = params.m;
      art.k = 1;  // wire convention for the flip grammar
      art.payload_bytes = rc_encode(to_symbols(choices), FrequencyModel::adaptive(2));
      break;
    }
    case Method::FibGk: {
      if (params.m < 2) throw std::invalid_argument("fib methods need m >= 2");
      if (params.k < 1) throw std::invalid_argument("fib-gk needs k >= 1");
      const ChoiceSequence choices = extract_choices(text, params.m, params.k);
      art.m = params.m;
      art.k = params.k;
      art.payload_bytes = rc_encode(to_symbols(choices), FrequencyModel::adaptive(params.k + 1));
      break;
    }
    case Method::Unary: {
      if (params.n == 0) throw std::invalid_argument("unary needs n >= 1");
      if (text.size() != params.n || text.find_first_not_of('a') != std::string_view::npos)
        throw MethodMismatch("unary input must be exactly a^n");
      return unary_pcfg_compress(params.n);
    }
  }
  return art;
}

std::string decompress(const CompressedArtifact& artifact) {
  switch (artifact.method) {
    case Method::Repair: {
      const Grammar g = deserialize_grammar(artifact.grammar_bytes);
      return expand(g);
    }
    case Method::PcfgRepair: {
      const Grammar g = deserialize_grammar(artifact.grammar_bytes);
      const auto flags = rc_decode(artifact.payload_bytes, FrequencyModel::adaptive(2),
                                   artifact.flag_count);
      return expand(g, ChoiceSequence(flags));
    }
    case Method::FibG0:
    case Method::FibGk: {
      if (artifact.m < 2 || artifact.m > 87)
        throw MalformedBytes("fibonacci index out of range");
      if (artifact.method == Method::FibGk && (artifact.k < 1 || artifact.k > 153))
        throw MalformedBytes("letter count out of range");
      const unsigned m = static_cast<unsigned>(artifact.m);
      const uint64_t count = fib_length(m);
      if (count > kMaxOutput) throw MalformedBytes("decoded text too large");
      const unsigned k =
          artifact.method == Method::FibG0 ? 0 : static_cast<unsigned>(artifact.k);
      const uint32_t alphabet = artifact.method == Method::FibG0
                                    ? 2
                                    : static_cast<uint32_t>(artifact.k + 1);
      const auto choices = rc_decode(artifact.payload_bytes, FrequencyModel::adaptive(alphabet),
                                     count);
      return reconstruct(m, k, ChoiceSequence(choices));
    }
    case Method::Unary:
      return unary_pcfg_decompress(artifact);
  }
  throw MethodMismatch("unknown method");
}

std::string decompress_bytes(std::span<const uint8_t> bytes) {
  return decompress(CompressedArtifact::from_bytes(bytes));
}

Grammar unary_grammar() {
  Grammar g;
  const uint32_t ta = g.add_terminal('a');
  const uint32_t s = g.add_nonterminal();
  g.add_rule(s, {Symbol::terminal(ta), Symbol::nonterminal(s)});
  g.add_rule(s, {Symbol::terminal(ta)});
  g.set_start({Symbol::nonterminal(s)});
  return g;
}

FrequencyModel unary_model(uint64_t n) {
  const double stop = 1.0 / static_cast<double>(n);
  return FrequencyModel::from_probabilities({1.0 - stop, stop});
}

CompressedArtifact unary_pcfg_compress(uint64_t n) {
  if (n == 0) throw std::invalid_argument("unary needs n >= 1");
  FrequencyModel model = unary_model(n);
  RangeEncoder enc;
  const auto continue_band = model.band(0);
  const auto stop_band = model.band(1);
  for (uint64_t i = 0; i + 1 < n; ++i)
    enc.encode(continue_band.cum, continue_band.freq, model.total());
  enc.encode(stop_band.cum, stop_band.freq, model.total());

  CompressedArtifact art;
  art.method = Method::Unary;
  art.n = n;
  art.payload_bytes = enc.finish();
  return art;
}

std::string unary_pcfg_decompress(const CompressedArtifact& artifact) {
  if (artifact.method != Method::Unary) throw MethodMismatch("not a unary artifact");
  const uint64_t n = artifact.n;
  if (n == 0 || n > kMaxOutput) throw MalformedBytes("unary length out of range");
  FrequencyModel model = unary_model(n);
  RangeDecoder dec(artifact.payload_bytes);
  for (uint64_t i = 0; i < n; ++i) {
    const uint32_t s = model.symbol_for(dec.decode_freq(model.total()));
    const auto band = model.band(s);
    dec.decode_update(band.cum, band.freq);
    const bool expect_stop = i + 1 == n;
    if (s != (expect_stop ? 1u : 0u))
      throw MalformedBytes("payload does not derive a^n");
  }
  return std::string(n, 'a');
}

Grammar doubling_slp(unsigned m) {
  if (m < 1) throw std::invalid_argument("doubling_slp needs m >= 1");
  Grammar g;
  const uint32_t ta = g.add_terminal('a');
  const uint32_t v0 = g.add_nonterminal();
  g.add_rule(v0, {Symbol::terminal(ta)});
  for (unsigned i = 1; i <= m; ++i) {
    const uint32_t vi = g.add_nonterminal();
    g.add_rule(vi, {Symbol::nonterminal(vi - 1), Symbol::nonterminal(vi - 1)});
  }
  g.set_start({Symbol::nonterminal(m)});
  return g;
}

}  // namespace pcfgc
