#pragma once

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcfgc/grammar.hpp"

namespace pcfgc::testing {

// A small ambiguous grammar over {a,b,c,d,z} generating ((a|z)bcd)*z, with
// two ambiguous heads (v6 and v9). Ships with the full rule sequence of one
// derivation of "abcdzbcdz" and that derivation's choice entries.
struct SampleGrammar {
  Grammar grammar;
  Pcfg pcfg;
  std::vector<uint32_t> v;  // v[1]..v[9] nonterminal ids
  uint32_t s = 0;           // start-rule head
  std::vector<RuleRef> rho;
  ChoiceSequence choices;
  std::string text;
};

inline SampleGrammar sample_grammar() {
  SampleGrammar out;
  Grammar& g = out.grammar;
  const uint32_t ta = g.add_terminal('a');
  const uint32_t tb = g.add_terminal('b');
  const uint32_t tc = g.add_terminal('c');
  const uint32_t td = g.add_terminal('d');
  const uint32_t tz = g.add_terminal('z');

  out.v.assign(10, 0);
  for (uint32_t i = 1; i <= 9; ++i) out.v[i] = g.add_nonterminal();
  out.s = g.add_nonterminal();
  const auto n = [&](uint32_t i) { return Symbol::nonterminal(out.v[i]); };

  g.add_rule(out.v[1], {Symbol::terminal(ta)});
  g.add_rule(out.v[2], {Symbol::terminal(tb)});
  g.add_rule(out.v[3], {Symbol::terminal(tc)});
  g.add_rule(out.v[4], {Symbol::terminal(td)});
  g.add_rule(out.v[5], {Symbol::terminal(tz)});
  g.add_rule(out.v[6], {n(1), n(2)});
  g.add_rule(out.v[6], {n(5), n(2)});
  g.add_rule(out.v[7], {n(3), n(4)});
  g.add_rule(out.v[8], {n(6), n(7)});
  g.add_rule(out.v[9], {n(8), n(9)});
  g.add_rule(out.v[9], {Symbol::terminal(tz)});
  g.add_rule(out.s, {n(9)});
  g.set_start({Symbol::nonterminal(out.s)});

  std::vector<std::vector<double>> probs(g.nonterminal_count());
  for (uint32_t h = 0; h < g.nonterminal_count(); ++h)
    probs[h].assign(g.rules(h).size(), 1.0);
  probs[out.v[6]] = {0.5, 0.5};
  probs[out.v[9]] = {0.7, 0.3};
  out.pcfg = Pcfg::with_probabilities(g, std::move(probs));

  const auto r = [&](uint32_t head_index, uint32_t choice) {
    return RuleRef{head_index == 10 ? out.s : out.v[head_index], choice};
  };
  out.rho = {r(10, 0), r(9, 0), r(8, 0), r(6, 0), r(1, 0), r(2, 0),
             r(7, 0),  r(3, 0), r(4, 0), r(9, 0), r(8, 0), r(6, 1),
             r(5, 0),  r(2, 0), r(7, 0), r(3, 0), r(4, 0), r(9, 1)};
  out.choices = ChoiceSequence{0, 0, 0, 1, 1};
  out.text = "abcdzbcdz";
  return out;
}

// Independent oracle for left-most rewriting: applies the given rules one at
// a time, each to the left-most nonterminal of the sentential form. Throws if
// a rule's head does not match or nonterminals remain at the end.
inline std::string leftmost_apply(const Grammar& g, const std::vector<RuleRef>& rules) {
  std::vector<Symbol> form(g.start().begin(), g.start().end());
  for (const RuleRef& ref : rules) {
    size_t at = form.size();
    for (size_t i = 0; i < form.size(); ++i)
      if (!form[i].is_terminal()) {
        at = i;
        break;
      }
    if (at == form.size()) throw std::logic_error("rule given but no nonterminal left");
    if (form[at].id != ref.head) throw std::logic_error("rule head is not the left-most nonterminal");
    const auto& body = g.rules(ref.head).at(ref.choice);
    form.erase(form.begin() + static_cast<std::ptrdiff_t>(at));
    form.insert(form.begin() + static_cast<std::ptrdiff_t>(at), body.begin(), body.end());
  }
  std::string text;
  for (const Symbol& s : form) {
    if (!s.is_terminal()) throw std::logic_error("nonterminal left after applying all rules");
    text.push_back(static_cast<char>(g.terminals()[s.id]));
  }
  return text;
}

// Random valid grammar: bodies reference only lower-numbered heads, so every
// derivation terminates.
inline Grammar random_grammar(std::mt19937_64& rng) {
  const auto below = [&rng](uint32_t bound) {
    return static_cast<uint32_t>(rng() % bound);
  };
  Grammar g;
  const uint32_t sigma = 1 + below(4);
  for (uint32_t i = 0; i < sigma; ++i) g.add_terminal(static_cast<uint8_t>('a' + i));
  const uint32_t heads = 1 + below(6);
  for (uint32_t h = 0; h < heads; ++h) {
    g.add_nonterminal();
    const uint32_t rule_count = 1 + below(3);
    for (uint32_t rule = 0; rule < rule_count; ++rule) {
      std::vector<Symbol> body;
      const uint32_t len = 1 + below(3);
      for (uint32_t i = 0; i < len; ++i) {
        if (h == 0 || below(2) == 0)
          body.push_back(Symbol::terminal(below(sigma)));
        else
          body.push_back(Symbol::nonterminal(below(h)));
      }
      g.add_rule(h, std::move(body));
    }
  }
  std::vector<Symbol> start;
  const uint32_t start_len = 1 + below(3);
  for (uint32_t i = 0; i < start_len; ++i) start.push_back(Symbol::nonterminal(below(heads)));
  g.set_start(std::move(start));
  return g;
}

// Walks one random derivation, recording a choice at every ambiguous head.
inline ChoiceSequence random_choices(const Grammar& g, std::mt19937_64& rng) {
  ChoiceSequence choices;
  std::vector<Symbol> stack(g.start().rbegin(), g.start().rend());
  while (!stack.empty()) {
    const Symbol s = stack.back();
    stack.pop_back();
    if (s.is_terminal()) continue;
    const auto& alts = g.rules(s.id);
    uint32_t idx = 0;
    if (alts.size() > 1) {
      idx = static_cast<uint32_t>(rng() % alts.size());
      choices.values.push_back(idx);
    }
    const auto& body = alts[idx];
    stack.insert(stack.end(), body.rbegin(), body.rend());
  }
  return choices;
}

}  // namespace pcfgc::testing
