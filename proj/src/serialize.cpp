#include "pcfgc/serialize.hpp"

namespace pcfgc {

namespace {

// A head is a terminal lift iff its single rule is exactly [terminal i] for
// its own index i; pair heads carry one or two binary bodies over earlier
// nonterminals.
void check_shape(const Grammar& g) {
  const uint32_t sigma = g.terminal_count();
  const uint32_t n = g.nonterminal_count();
  if (sigma == 0 || n < sigma) throw UnsupportedShape("expected one lift head per terminal");
  for (uint32_t i = 0; i < sigma; ++i) {
    const auto& alts = g.rules(i);
    if (alts.size() != 1 || alts[0].size() != 1 || alts[0][0] != Symbol::terminal(i))
      throw UnsupportedShape("head is not a terminal lift");
  }
  for (uint32_t h = sigma; h < n; ++h) {
    const auto& alts = g.rules(h);
    if (alts.empty() || alts.size() > 2)
      throw UnsupportedShape("pair head must have one or two rules");
    for (const auto& body : alts) {
      if (body.size() != 2) throw UnsupportedShape("pair rule body must have two symbols");
      for (const Symbol& s : body)
        if (s.is_terminal() || s.id >= h)
          throw UnsupportedShape("pair rule may only reference earlier nonterminals");
    }
  }
  if (g.start().empty()) throw UnsupportedShape("start sequence is empty");
  for (const Symbol& s : g.start())
    if (s.is_terminal() || s.id >= n)
      throw UnsupportedShape("start symbols must be known nonterminals");
}

}  // namespace

void write_grammar_section(std::vector<uint8_t>& out, const Grammar& g) {
  check_shape(g);
  const uint32_t sigma = g.terminal_count();
  write_varint(out, sigma);
  for (const uint8_t byte : g.terminals()) out.push_back(byte);
  const uint32_t pairs = g.nonterminal_count() - sigma;
  write_varint(out, pairs);
  for (uint32_t h = sigma; h < g.nonterminal_count(); ++h) {
    const auto& alts = g.rules(h);
    write_varint(out, alts[0][0].id);
    write_varint(out, alts[0][1].id);
    out.push_back(alts.size() == 2 ? 1 : 0);
    if (alts.size() == 2) {
      write_varint(out, alts[1][0].id);
      write_varint(out, alts[1][1].id);
    }
  }
  write_varint(out, g.start().size());
  for (const Symbol& s : g.start()) write_varint(out, s.id);
}

Grammar read_grammar_section(ByteReader& in) {
  const uint64_t sigma = in.varint();
  if (sigma == 0 || sigma > 256) throw MalformedBytes("terminal count out of range");
  Grammar g;
  for (uint64_t i = 0; i < sigma; ++i) g.add_terminal(in.byte());
  for (uint64_t i = 0; i < sigma; ++i) {
    const uint32_t v = g.add_nonterminal();
    g.add_rule(v, {Symbol::terminal(v)});
  }
  const uint64_t pairs = in.varint();
  for (uint64_t i = 0; i < pairs; ++i) {
    const uint32_t head = g.add_nonterminal();
    const uint64_t left = in.varint();
    const uint64_t right = in.varint();
    if (left >= head || right >= head)
      throw MalformedBytes("pair rule references a later nonterminal");
    g.add_rule(head, {Symbol::nonterminal(static_cast<uint32_t>(left)),
                      Symbol::nonterminal(static_cast<uint32_t>(right))});
    const uint8_t flag = in.byte();
    if (flag > 1) throw MalformedBytes("bad rule flag byte");
    if (flag == 1) {
      const uint64_t left2 = in.varint();
      const uint64_t right2 = in.varint();
      if (left2 >= head || right2 >= head)
        throw MalformedBytes("pair rule references a later nonterminal");
      g.add_rule(head, {Symbol::nonterminal(static_cast<uint32_t>(left2)),
                        Symbol::nonterminal(static_cast<uint32_t>(right2))});
    }
  }
  const uint64_t start_len = in.varint();
  if (start_len == 0) throw MalformedBytes("start sequence is empty");
  // No up-front reserve: every iteration consumes at least one input byte, so
  // a crafted length cannot balloon memory past the input size.
  std::vector<Symbol> start;
  for (uint64_t i = 0; i < start_len; ++i) {
    const uint64_t id = in.varint();
    if (id >= sigma + pairs) throw MalformedBytes("start symbol out of range");
    start.push_back(Symbol::nonterminal(static_cast<uint32_t>(id)));
  }
  g.set_start(std::move(start));
  return g;
}

std::vector<uint8_t> serialize_grammar(const Grammar& g) {
  std::vector<uint8_t> out;
  write_grammar_section(out, g);
  return out;
}

Grammar deserialize_grammar(std::span<const uint8_t> bytes) {
  ByteReader in(bytes);
  Grammar g = read_grammar_section(in);
  if (!in.at_end()) throw MalformedBytes("trailing bytes after grammar");
  return g;
}

}  // namespace pcfgc
