#include "pcfgc/repair.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace pcfgc {

namespace {

using CountMap = std::unordered_map<Bigram, uint32_t, BigramHash>;

// Non-overlapping bigram counts in one left-to-right pass. A pair with equal
// halves is skipped when its previous position was already counted for the
// same pair, which yields floor(run/2) per run; distinct halves can never
// overlap themselves. When `filter` is given only those pairs are counted.
CountMap fresh_counts(const WorkingSequence& seq,
                      const WorkingSequence::DirtySet* filter = nullptr) {
  CountMap counts;
  std::unordered_map<Bigram, size_t, BigramHash> last;
  const size_t n = seq.size();
  for (size_t i = 0; i + 1 < n; ++i) {
    const Bigram p{seq.symbol_at(i), seq.symbol_at(i + 1)};
    if (filter && !filter->count(p)) continue;
    if (p.first == p.second) {
      const auto it = last.find(p);
      if (it != last.end() && it->second + 1 == i) continue;
    }
    ++counts[p];
    last[p] = i;
  }
  return counts;
}

// Frequency table for the driver loop. Incremental mode keeps exact counts
// in count-indexed buckets and, after each replacement round, recounts just
// the bigram types the edit could have touched. Rescan mode recomputes from
// scratch on every query via the same scan the public op uses.
class BigramIndex {
 public:
  BigramIndex(const WorkingSequence& seq, RepairOptions::Stats mode) : mode_(mode) {
    if (mode_ == RepairOptions::Stats::Incremental)
      for (const auto& [p, c] : fresh_counts(seq)) set_count(p, c);
  }

  std::optional<Bigram> max(const WorkingSequence& seq) const {
    if (mode_ == RepairOptions::Stats::Rescan) return find_max_bigram(seq);
    if (buckets_.empty()) return std::nullopt;
    const auto& [count, pairs] = *buckets_.rbegin();
    if (count < 2) return std::nullopt;
    return *pairs.begin();
  }

  void after_replace(const WorkingSequence& seq, const WorkingSequence::DirtySet& dirty) {
    if (mode_ == RepairOptions::Stats::Rescan) return;
    CountMap updated = fresh_counts(seq, &dirty);
    for (const Bigram& p : dirty) {
      const auto it = updated.find(p);
      set_count(p, it == updated.end() ? 0 : it->second);
    }
  }

 private:
  void set_count(Bigram p, uint32_t count) {
    const auto it = counts_.find(p);
    if (it != counts_.end()) {
      if (it->second == count) return;
      auto bucket = buckets_.find(it->second);
      bucket->second.erase(p);
      if (bucket->second.empty()) buckets_.erase(bucket);
      counts_.erase(it);
    }
    if (count == 0) return;
    counts_.emplace(p, count);
    buckets_[count].insert(p);
  }

  RepairOptions::Stats mode_;
  CountMap counts_;
  std::map<uint32_t, std::set<Bigram>> buckets_;
};

}  // namespace

WorkingSequence WorkingSequence::from_text(std::string_view text) {
  if (text.empty()) throw EmptyInput("cannot build a working sequence from empty text");
  WorkingSequence seq;
  uint32_t lift_of[256];
  std::fill(std::begin(lift_of), std::end(lift_of), UINT32_MAX);
  seq.nodes_.reserve(text.size());
  seq.tokens_.reserve(text.size());
  for (const char ch : text) {
    const auto byte = static_cast<uint8_t>(ch);
    if (lift_of[byte] == UINT32_MAX) {
      lift_of[byte] = static_cast<uint32_t>(seq.terminals_.size());
      seq.terminals_.push_back(byte);
    }
    seq.nodes_.push_back({lift_of[byte], 0, -1, -1});
    seq.tokens_.push_back(static_cast<uint32_t>(seq.nodes_.size() - 1));
  }
  return seq;
}

const WorkingSequence::PairRules& WorkingSequence::pair_rules(uint32_t head) const {
  if (head < lift_count() || head >= head_count())
    throw UnknownRule("no pair rules for this head");
  return pair_rules_[head - lift_count()];
}

uint32_t WorkingSequence::add_pair_head(Bigram major) {
  pair_rules_.push_back({major, std::nullopt});
  return head_count() - 1;
}

void WorkingSequence::add_minor_rule(uint32_t head, Bigram body) {
  if (head < lift_count() || head >= head_count())
    throw UnknownRule("no such pair head");
  auto& rules = pair_rules_[head - lift_count()];
  if (rules.minor) throw Error("head already has a second rule");
  rules.minor = body;
}

size_t WorkingSequence::replace(Bigram b, uint32_t head, RuleFlag flag, DirtySet* dirty) {
  if (head < lift_count() || head >= head_count())
    throw RuleMissing("replacement head has no pair rule");
  const auto& rules = pair_rules_[head - lift_count()];
  if (flag == RuleFlag::Major) {
    if (rules.major != b) throw RuleMissing("major rule body does not match the bigram");
  } else {
    if (!rules.minor || *rules.minor != b)
      throw RuleMissing("minor rule body does not match the bigram");
  }

  const auto sym = [this](uint32_t node) { return nodes_[node].head; };
  std::vector<uint32_t> out;
  out.reserve(tokens_.size());
  size_t replaced = 0;
  bool prev_inserted = false;
  for (size_t i = 0; i < tokens_.size();) {
    const bool match = i + 1 < tokens_.size() && sym(tokens_[i]) == b.first &&
                       sym(tokens_[i + 1]) == b.second;
    if (match) {
      if (dirty) {
        dirty->insert(b);
        if (i > 0) dirty->insert({sym(tokens_[i - 1]), b.first});
        if (i + 2 < tokens_.size()) dirty->insert({b.second, sym(tokens_[i + 2])});
        if (!out.empty()) dirty->insert({sym(out.back()), head});
      }
      nodes_.push_back({head, static_cast<uint8_t>(flag == RuleFlag::Minor ? 1 : 0),
                        static_cast<int32_t>(tokens_[i]), static_cast<int32_t>(tokens_[i + 1])});
      out.push_back(static_cast<uint32_t>(nodes_.size() - 1));
      ++replaced;
      i += 2;
      prev_inserted = true;
    } else {
      if (dirty && prev_inserted) dirty->insert({head, sym(tokens_[i])});
      out.push_back(tokens_[i]);
      ++i;
      prev_inserted = false;
    }
  }
  tokens_ = std::move(out);
  return replaced;
}

std::string WorkingSequence::flatten() const {
  std::string out;
  std::vector<int32_t> stack;
  for (const uint32_t tok : tokens_) {
    stack.push_back(static_cast<int32_t>(tok));
    while (!stack.empty()) {
      const Node& node = nodes_[static_cast<size_t>(stack.back())];
      stack.pop_back();
      if (node.left < 0) {
        out.push_back(static_cast<char>(terminals_[node.head]));
      } else {
        stack.push_back(node.right);
        stack.push_back(node.left);
      }
    }
  }
  return out;
}

Grammar WorkingSequence::to_grammar() const {
  Grammar g;
  for (const uint8_t byte : terminals_) g.add_terminal(byte);
  for (uint32_t i = 0; i < lift_count(); ++i) {
    const uint32_t v = g.add_nonterminal();
    g.add_rule(v, {Symbol::terminal(i)});
  }
  for (const PairRules& rules : pair_rules_) {
    const uint32_t v = g.add_nonterminal();
    g.add_rule(v, {Symbol::nonterminal(rules.major.first),
                   Symbol::nonterminal(rules.major.second)});
    if (rules.minor)
      g.add_rule(v, {Symbol::nonterminal(rules.minor->first),
                     Symbol::nonterminal(rules.minor->second)});
  }
  std::vector<Symbol> start;
  start.reserve(tokens_.size());
  for (const uint32_t tok : tokens_) start.push_back(Symbol::nonterminal(nodes_[tok].head));
  g.set_start(std::move(start));
  return g;
}

ChoiceSequence WorkingSequence::flag_sequence() const {
  const auto ambiguous = [this](uint32_t head) {
    return head >= lift_count() && pair_rules_[head - lift_count()].minor.has_value();
  };
  ChoiceSequence flags;
  std::vector<int32_t> stack;
  for (const uint32_t tok : tokens_) {
    stack.push_back(static_cast<int32_t>(tok));
    while (!stack.empty()) {
      const Node& node = nodes_[static_cast<size_t>(stack.back())];
      stack.pop_back();
      if (ambiguous(node.head)) flags.values.push_back(node.choice);
      if (node.left >= 0) {
        stack.push_back(node.right);
        stack.push_back(node.left);
      }
    }
  }
  return flags;
}

std::optional<Bigram> find_max_bigram(const WorkingSequence& t) {
  std::optional<Bigram> best;
  uint32_t best_count = 1;  // require count >= 2
  for (const auto& [p, c] : fresh_counts(t)) {
    if (c > best_count || (c == best_count && best && p < *best)) {
      best = p;
      best_count = c;
    }
  }
  return best;
}

std::optional<uint32_t> find_max_context(const WorkingSequence& t, uint32_t head) {
  std::unordered_map<uint32_t, uint32_t> counts;
  for (size_t i = 1; i < t.size(); ++i)
    if (t.symbol_at(i) == head) ++counts[t.symbol_at(i - 1)];
  std::optional<uint32_t> best;
  uint32_t best_count = 0;
  for (const auto& [sym, c] : counts) {
    if (c > best_count || (c == best_count && best && sym < *best)) {
      best = sym;
      best_count = c;
    }
  }
  return best;
}

std::optional<Bigram> find_min_bigram(const WorkingSequence& t, uint32_t context,
                                      Bigram major, uint32_t exclude_head) {
  const auto qualifies = [&](const Bigram& p) {
    if (p == major) return false;
    if (p.first == exclude_head || p.second == exclude_head) return false;
    if (p.first == major.first) return p.second != major.second && t.is_lift(p.second);
    if (p.second == major.second) return t.is_lift(p.first);
    return false;
  };
  std::map<Bigram, uint32_t> counts;  // ordered, so ties take the smallest pair
  for (size_t i = 0; i + 2 < t.size(); ++i)
    if (t.symbol_at(i) == context) {
      const Bigram p{t.symbol_at(i + 1), t.symbol_at(i + 2)};
      if (qualifies(p)) ++counts[p];
    }
  std::optional<Bigram> best;
  uint32_t best_count = 0;
  for (const auto& [p, c] : counts)
    if (!best || c < best_count) {
      best = p;
      best_count = c;
    }
  return best;
}

namespace {

WorkingSequence run_repair(std::string_view text, bool with_minor, const RepairOptions& opts) {
  WorkingSequence seq = WorkingSequence::from_text(text);
  BigramIndex index(seq, opts.stats);
  while (const auto b = index.max(seq)) {
    const uint32_t head = seq.add_pair_head(*b);
    WorkingSequence::DirtySet dirty;
    seq.replace(*b, head, RuleFlag::Major, &dirty);
    if (with_minor) {
      if (const auto context = find_max_context(seq, head)) {
        if (const auto minor = find_min_bigram(seq, *context, *b, head)) {
          seq.add_minor_rule(head, *minor);
          seq.replace(*minor, head, RuleFlag::Minor, &dirty);
        }
      }
    }
    index.after_replace(seq, dirty);
    if (opts.check_invariants && seq.flatten() != text)
      throw Error("annotations no longer flatten to the input");
  }
  return seq;
}

}  // namespace

Grammar repair_classic(std::string_view text, const RepairOptions& opts) {
  return run_repair(text, false, opts).to_grammar();
}

RepairPcfgResult repair_pcfg(std::string_view text, const RepairOptions& opts) {
  const WorkingSequence seq = run_repair(text, true, opts);
  return {seq.to_grammar(), seq.flag_sequence()};
}

}  // namespace pcfgc
