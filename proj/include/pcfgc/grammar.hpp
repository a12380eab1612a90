#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "pcfgc/errors.hpp"

namespace pcfgc {

// A grammar symbol: either a terminal (index into the grammar's terminal
// table) or a nonterminal (index into its rule table).
struct Symbol {
  enum class Kind : uint8_t { Terminal, Nonterminal };

  Kind kind = Kind::Terminal;
  uint32_t id = 0;

  static Symbol terminal(uint32_t id) { return {Kind::Terminal, id}; }
  static Symbol nonterminal(uint32_t id) { return {Kind::Nonterminal, id}; }
  bool is_terminal() const { return kind == Kind::Terminal; }

  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

// Reference to one rule: the head nonterminal and the rule's position among
// that head's alternatives.
struct RuleRef {
  uint32_t head = 0;
  uint32_t choice = 0;

  friend auto operator<=>(const RuleRef&, const RuleRef&) = default;
};

// The rule choices taken at ambiguous heads (heads with more than one rule)
// along a left-most derivation, in the order the heads are expanded. Heads
// with a single rule contribute no entry.
struct ChoiceSequence {
  std::vector<uint32_t> values;

  ChoiceSequence() = default;
  ChoiceSequence(std::initializer_list<uint32_t> v) : values(v) {}
  explicit ChoiceSequence(std::vector<uint32_t> v) : values(std::move(v)) {}

  size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }

  friend bool operator==(const ChoiceSequence&, const ChoiceSequence&) = default;
};

// Context-free grammar over byte terminals, generating from a start sequence
// of symbols rather than a single start nonterminal. Rules are grouped per
// head; a rule's choice index is its position within the head's list.
class Grammar {
 public:
  uint32_t add_terminal(uint8_t byte);
  uint32_t add_nonterminal();
  // Appends a rule to `head`'s alternatives and returns its choice index.
  uint32_t add_rule(uint32_t head, std::vector<Symbol> body);
  void set_start(std::vector<Symbol> start);

  std::span<const uint8_t> terminals() const { return terminals_; }
  uint32_t terminal_count() const { return static_cast<uint32_t>(terminals_.size()); }
  uint32_t nonterminal_count() const { return static_cast<uint32_t>(rules_.size()); }
  const std::vector<std::vector<Symbol>>& rules(uint32_t head) const;
  std::span<const Symbol> start() const { return start_; }

  // Straight-line: every head has exactly one rule, so the grammar generates
  // a single string and needs no choices.
  bool is_slg() const;
  // Reported for information only: every body is a terminal unit or a pair.
  bool is_cnf() const;

  friend bool operator==(const Grammar&, const Grammar&) = default;

 private:
  std::vector<uint8_t> terminals_;
  std::vector<std::vector<std::vector<Symbol>>> rules_;  // [head][choice] = body
  std::vector<Symbol> start_;
};

// Grammar plus per-rule probabilities. Each head's probabilities sum to 1.
// Adaptive mode carries no numbers: rule likelihoods are left to the coder's
// adaptive frequency model.
class Pcfg {
 public:
  static Pcfg adaptive(Grammar g);
  // `probs[head][choice]` in linear space; stored internally as logs.
  static Pcfg with_probabilities(Grammar g, std::vector<std::vector<double>> probs);

  const Grammar& grammar() const { return grammar_; }
  bool is_adaptive() const { return adaptive_; }
  double rule_log_prob(uint32_t head, uint32_t choice) const;
  const std::vector<std::vector<double>>& log_probs() const;

 private:
  Grammar grammar_;
  bool adaptive_ = true;
  std::vector<std::vector<double>> log_probs_;
};

struct Violation {
  enum class Kind {
    SymbolOutOfBounds,
    EmptyBody,
    NoRules,
    ProbOutOfRange,
    ProbSumViolation,
  };

  Kind kind;
  uint32_t head = 0;  // offending head; kNoHead when the start sequence is at fault
  std::string detail;

  static constexpr uint32_t kNoHead = UINT32_MAX;
};

// Expands the start sequence left-most, consuming one entry of `choices` at
// every ambiguous head. Extra trailing entries are ignored; running out of
// entries or indexing a missing rule throws.
std::string expand(const Grammar& g, const ChoiceSequence& choices = {});

// The full left-most derivation as a rule-reference sequence (one entry per
// head expansion, ambiguous or not).
std::vector<RuleRef> full_derivation(const Grammar& g, const ChoiceSequence& choices = {});

// Filters a derivation down to the entries at ambiguous heads, recovering the
// choice sequence that reproduces it.
ChoiceSequence choices_from_derivation(const Grammar& g, std::span<const RuleRef> deriv);

// Probability of a derivation = product of its rules' probabilities.
// Computed in log space; requires explicit probabilities.
double derivation_probability(const Pcfg& p, std::span<const RuleRef> deriv);
double log_derivation_probability(const Pcfg& p, std::span<const RuleRef> deriv);

std::vector<Violation> validate(const Grammar& g);
std::vector<Violation> validate(const Pcfg& p);

}  // namespace pcfgc
