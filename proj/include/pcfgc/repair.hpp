#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pcfgc/grammar.hpp"

namespace pcfgc {

// A bigram of working-sequence symbols (nonterminal ids).
using Bigram = std::pair<uint32_t, uint32_t>;

struct BigramHash {
  size_t operator()(const Bigram& b) const {
    return std::hash<uint64_t>{}((uint64_t(b.first) << 32) | b.second);
  }
};

enum class RuleFlag : uint8_t { Major = 0, Minor = 1 };

// The token sequence being compressed, together with the grammar under
// construction. Tokens start as terminal-lifting nonterminals (one per
// distinct input byte, in first-use order, ids 0..sigma-1) and are merged
// into pair heads (ids sigma, sigma+1, ...). Every token carries the
// derivation subtree it abbreviates, so the original text and the per-node
// choice flags stay recoverable at any point.
class WorkingSequence {
 public:
  using DirtySet = std::unordered_set<Bigram, BigramHash>;

  struct PairRules {
    Bigram major;
    std::optional<Bigram> minor;
  };

  // Lifts every byte of `text` to its nonterminal. Throws EmptyInput.
  static WorkingSequence from_text(std::string_view text);

  size_t size() const { return tokens_.size(); }
  uint32_t symbol_at(size_t i) const { return nodes_[tokens_[i]].head; }
  uint32_t lift_count() const { return static_cast<uint32_t>(terminals_.size()); }
  bool is_lift(uint32_t symbol) const { return symbol < lift_count(); }
  std::span<const uint8_t> terminals() const { return terminals_; }
  uint32_t head_count() const { return lift_count() + static_cast<uint32_t>(pair_rules_.size()); }
  const PairRules& pair_rules(uint32_t head) const;

  // Registers a fresh pair head with `major` as its first rule.
  uint32_t add_pair_head(Bigram major);
  // Adds the second rule to an existing pair head.
  void add_minor_rule(uint32_t head, Bigram body);

  // Replaces occurrences of `b` by `head`, scanning left to right one
  // occurrence at a time (so "aaaaa" with b = aa becomes "vva"). The rule
  // selected by `flag` must have body `b`, else RuleMissing. Returns the
  // number of occurrences replaced. When `dirty` is given, every bigram type
  // whose count may have changed is recorded there.
  size_t replace(Bigram b, uint32_t head, RuleFlag flag, DirtySet* dirty = nullptr);

  // Re-derives the original text from the token annotations.
  std::string flatten() const;

  // Exports the construction as a Grammar: terminal-lift rules, pair rules,
  // start sequence = current tokens.
  Grammar to_grammar() const;

  // Pre-order walk of the derivation forest, emitting the choice flag of
  // every node whose head ended up with two rules. Expanding to_grammar()
  // with this sequence reproduces the input text.
  ChoiceSequence flag_sequence() const;

 private:
  struct Node {
    uint32_t head;
    uint8_t choice;
    int32_t left;   // node index, -1 for lift leaves
    int32_t right;
  };

  std::vector<uint8_t> terminals_;
  std::vector<Node> nodes_;
  std::vector<uint32_t> tokens_;  // node indices
  std::vector<PairRules> pair_rules_;
};

struct RepairOptions {
  enum class Stats { Incremental, Rescan };
  Stats stats = Stats::Incremental;
  // Re-derive the input from the annotations after every iteration (slow;
  // meant for tests).
  bool check_invariants = false;
};

// The bigram occurring most often in `t`, counting non-overlapping
// occurrences left to right; requires count >= 2. Ties break to the smallest
// (first, second) pair. Fresh scan of the current sequence state.
std::optional<Bigram> find_max_bigram(const WorkingSequence& t);

// The symbol appearing most often immediately before an occurrence of
// `head`; ties break to the smallest symbol id. Occurrences at position 0
// have no predecessor and do not count.
std::optional<uint32_t> find_max_context(const WorkingSequence& t, uint32_t head);

// Among bigrams starting right after an occurrence of `context`, the least
// frequent one that differs from `major` in exactly one position, where the
// differing symbol is a terminal lift. Candidates equal to `major` or
// containing `exclude_head` (the freshly created head, to keep its rule
// bodies free of self-reference) are skipped. Ties break to the smallest
// pair; returns nullopt when no candidate occurs.
std::optional<Bigram> find_min_bigram(const WorkingSequence& t, uint32_t context,
                                      Bigram major, uint32_t exclude_head);

// Classic recursive pair replacement: repeatedly replace the most frequent
// bigram until none repeats. Output is straight-line.
Grammar repair_classic(std::string_view text, const RepairOptions& opts = {});

struct RepairPcfgResult {
  Grammar grammar;
  ChoiceSequence flags;
};

// Pair replacement with per-head rule pairs: after each major replacement, a
// rare bigram differing in one lifted letter may join the same head as its
// minor rule and be replaced too. The flags pick major/minor per node;
// expand(grammar, flags) == text.
RepairPcfgResult repair_pcfg(std::string_view text, const RepairOptions& opts = {});

}  // namespace pcfgc
