#include "pcfgc/grammar.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace pcfgc {

uint32_t Grammar::add_terminal(uint8_t byte) {
  terminals_.push_back(byte);
  return static_cast<uint32_t>(terminals_.size() - 1);
}

uint32_t Grammar::add_nonterminal() {
  rules_.emplace_back();
  return static_cast<uint32_t>(rules_.size() - 1);
}

uint32_t Grammar::add_rule(uint32_t head, std::vector<Symbol> body) {
  if (head >= rules_.size()) throw UnknownRule("add_rule: no such nonterminal");
  rules_[head].push_back(std::move(body));
  return static_cast<uint32_t>(rules_[head].size() - 1);
}

void Grammar::set_start(std::vector<Symbol> start) { start_ = std::move(start); }

const std::vector<std::vector<Symbol>>& Grammar::rules(uint32_t head) const {
  if (head >= rules_.size()) throw UnknownRule("rules: no such nonterminal");
  return rules_[head];
}

bool Grammar::is_slg() const {
  for (const auto& alts : rules_)
    if (alts.size() != 1) return false;
  return true;
}

bool Grammar::is_cnf() const {
  for (const auto& alts : rules_)
    for (const auto& body : alts) {
      if (body.size() == 1 && body[0].is_terminal()) continue;
      if (body.size() == 2) continue;
      return false;
    }
  return true;
}

Pcfg Pcfg::adaptive(Grammar g) {
  Pcfg p;
  p.grammar_ = std::move(g);
  p.adaptive_ = true;
  return p;
}

Pcfg Pcfg::with_probabilities(Grammar g, std::vector<std::vector<double>> probs) {
  if (probs.size() != g.nonterminal_count())
    throw std::invalid_argument("probability table does not match nonterminal count");
  for (uint32_t h = 0; h < g.nonterminal_count(); ++h)
    if (probs[h].size() != g.rules(h).size())
      throw std::invalid_argument("probability row does not match rule count");
  Pcfg p;
  p.grammar_ = std::move(g);
  p.adaptive_ = false;
  p.log_probs_.reserve(probs.size());
  for (auto& row : probs) {
    std::vector<double> logs;
    logs.reserve(row.size());
    for (double v : row) logs.push_back(std::log(v));
    p.log_probs_.push_back(std::move(logs));
  }
  return p;
}

double Pcfg::rule_log_prob(uint32_t head, uint32_t choice) const {
  if (adaptive_) throw std::logic_error("adaptive grammar carries no explicit probabilities");
  if (head >= log_probs_.size() || choice >= log_probs_[head].size())
    throw UnknownRule("no such rule");
  return log_probs_[head][choice];
}

const std::vector<std::vector<double>>& Pcfg::log_probs() const {
  if (adaptive_) throw std::logic_error("adaptive grammar carries no explicit probabilities");
  return log_probs_;
}

namespace {

// Left-most expansion shared by expand / full_derivation: pre-order DFS with
// an explicit stack, consuming one choice entry at each multi-rule head.
void derive(const Grammar& g, const ChoiceSequence& choices, std::string* out,
            std::vector<RuleRef>* deriv) {
  std::vector<Symbol> stack(g.start().rbegin(), g.start().rend());
  size_t cursor = 0;
  while (!stack.empty()) {
    const Symbol s = stack.back();
    stack.pop_back();
    if (s.is_terminal()) {
      if (s.id >= g.terminal_count()) throw Error("terminal symbol out of bounds");
      if (out) out->push_back(static_cast<char>(g.terminals()[s.id]));
      continue;
    }
    const auto& alts = g.rules(s.id);
    if (alts.empty()) throw EmptyDerivation("nonterminal has no rules");
    uint32_t idx = 0;
    if (alts.size() > 1) {
      if (cursor >= choices.size()) throw ChoiceUnderflow("choice sequence exhausted");
      idx = choices.values[cursor++];
      if (idx >= alts.size()) throw ChoiceOutOfRange("choice index exceeds rule count");
    }
    if (deriv) deriv->push_back({s.id, idx});
    const auto& body = alts[idx];
    stack.insert(stack.end(), body.rbegin(), body.rend());
  }
}

}  // namespace

std::string expand(const Grammar& g, const ChoiceSequence& choices) {
  std::string out;
  derive(g, choices, &out, nullptr);
  return out;
}

std::vector<RuleRef> full_derivation(const Grammar& g, const ChoiceSequence& choices) {
  std::vector<RuleRef> deriv;
  derive(g, choices, nullptr, &deriv);
  return deriv;
}

ChoiceSequence choices_from_derivation(const Grammar& g, std::span<const RuleRef> deriv) {
  ChoiceSequence out;
  for (const RuleRef& r : deriv) {
    if (r.head >= g.nonterminal_count() || r.choice >= g.rules(r.head).size())
      throw UnknownRule("derivation references a rule outside the grammar");
    if (g.rules(r.head).size() > 1) out.values.push_back(r.choice);
  }
  return out;
}

double log_derivation_probability(const Pcfg& p, std::span<const RuleRef> deriv) {
  double sum = 0.0;
  for (const RuleRef& r : deriv) {
    if (r.head >= p.grammar().nonterminal_count() ||
        r.choice >= p.grammar().rules(r.head).size())
      throw UnknownRule("derivation references a rule outside the grammar");
    sum += p.rule_log_prob(r.head, r.choice);
  }
  return sum;
}

double derivation_probability(const Pcfg& p, std::span<const RuleRef> deriv) {
  return std::exp(log_derivation_probability(p, deriv));
}

namespace {

void check_symbols(const Grammar& g, std::span<const Symbol> seq, uint32_t head,
                   const char* where, std::vector<Violation>* out) {
  for (const Symbol& s : seq) {
    const bool ok = s.is_terminal() ? s.id < g.terminal_count()
                                    : s.id < g.nonterminal_count();
    if (!ok)
      out->push_back({Violation::Kind::SymbolOutOfBounds, head,
                      std::string(where) + ": symbol id out of bounds"});
  }
}

}  // namespace

std::vector<Violation> validate(const Grammar& g) {
  std::vector<Violation> out;
  for (uint32_t h = 0; h < g.nonterminal_count(); ++h) {
    const auto& alts = g.rules(h);
    if (alts.empty()) out.push_back({Violation::Kind::NoRules, h, "head has no rules"});
    for (const auto& body : alts) {
      if (body.empty()) out.push_back({Violation::Kind::EmptyBody, h, "rule body is empty"});
      check_symbols(g, body, h, "body", &out);
    }
  }
  check_symbols(g, g.start(), Violation::kNoHead, "start", &out);
  return out;
}

std::vector<Violation> validate(const Pcfg& p) {
  std::vector<Violation> out = validate(p.grammar());
  if (p.is_adaptive()) return out;
  for (uint32_t h = 0; h < p.grammar().nonterminal_count(); ++h) {
    double sum = 0.0;
    bool bad_value = false;
    for (uint32_t c = 0; c < p.grammar().rules(h).size(); ++c) {
      const double v = std::exp(p.rule_log_prob(h, c));
      if (!(v >= 0.0 && v <= 1.0) || std::isnan(v)) bad_value = true;
      sum += v;
    }
    if (bad_value)
      out.push_back({Violation::Kind::ProbOutOfRange, h, "rule probability outside [0, 1]"});
    if (std::abs(sum - 1.0) > 1e-9)
      out.push_back({Violation::Kind::ProbSumViolation, h, "head probabilities do not sum to 1"});
  }
  return out;
}

}  // namespace pcfgc
