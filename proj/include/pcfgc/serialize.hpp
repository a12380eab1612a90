#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pcfgc/grammar.hpp"
#include "pcfgc/varint.hpp"

namespace pcfgc {

// Byte layout of a pair-replacement grammar (all integers LEB128 varints):
//
//   varint sigma, sigma terminal bytes,
//   varint P, then P pair records:
//     varint left, varint right, one flag byte (1 = has second rule),
//     [varint left', varint right'],
//   varint |start|, start symbols as varints.
//
// Symbol ids: 0..sigma-1 are the terminal-lifting heads (in terminal-table
// order), sigma..sigma+P-1 the pair heads in creation order.
//
// serialize_grammar accepts exactly that shape (unit terminal rules plus
// binary pair rules referencing earlier heads, non-empty all-nonterminal
// start) and throws UnsupportedShape otherwise. deserialize_grammar throws
// MalformedBytes on anything structurally invalid, including trailing bytes.
std::vector<uint8_t> serialize_grammar(const Grammar& g);
Grammar deserialize_grammar(std::span<const uint8_t> bytes);

// Section-level variants for embedding in a larger stream.
void write_grammar_section(std::vector<uint8_t>& out, const Grammar& g);
Grammar read_grammar_section(ByteReader& in);

}  // namespace pcfgc
