// Acceptance checks for the grammar-compression toolkit. Each check prints
// one [PASS]/[FAIL] line and enforces its own wall-clock budget; the process
// exit code is the number of failed checks.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "pcfgc/bench.hpp"
#include "pcfgc/container.hpp"
#include "pcfgc/errors.hpp"
#include "pcfgc/fibonacci.hpp"
#include "pcfgc/grammar.hpp"
#include "pcfgc/range_coder.hpp"
#include "pcfgc/repair.hpp"
#include "pcfgc/serialize.hpp"

using namespace pcfgc;

namespace {

int g_failures = 0;

// Runs one check; `body` returns an empty string on success or the failure
// reason. The time budget covers the body only.
void criterion(int number, const std::string& label, double budget_seconds,
               const std::function<std::string()>& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string reason;
  try {
    reason = body();
  } catch (const std::exception& e) {
    reason = std::string("unexpected exception: ") + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (reason.empty() && elapsed > budget_seconds) {
    std::ostringstream over;
    over << "time budget exceeded: " << elapsed << " s > " << budget_seconds << " s";
    reason = over.str();
  }
  if (reason.empty()) {
    std::printf("[PASS] criterion %d: %s (%.3f s)\n", number, label.c_str(), elapsed);
  } else {
    std::printf("[FAIL] criterion %d: %s (%.3f s) — %s\n", number, label.c_str(),
                elapsed, reason.c_str());
    ++g_failures;
  }
  std::fflush(stdout);
}

std::string check_example_grammar() {
  const testing::SampleGrammar ex = testing::sample_grammar();
  const double p = derivation_probability(ex.pcfg, ex.rho);
  const double expected = 0.03675;
  if (std::abs(p - expected) > 1e-12 * expected) {
    std::ostringstream out;
    out.precision(17);
    out << "derivation probability " << p << " != " << expected;
    return out.str();
  }
  if (const std::string text = expand(ex.grammar, ex.choices); text != ex.text)
    return "expand produced \"" + text + "\" instead of \"" + ex.text + "\"";
  if (full_derivation(ex.grammar, ex.choices) != ex.rho)
    return "full derivation differs from the recorded rule sequence";
  return {};
}

std::string check_fibonacci_facts() {
  if (fib_string(4) != "abaab") return "fib_string(4) != abaab";
  if (fib_string(5) != "abaababa") return "fib_string(5) != abaababa";
  if (fib_string(20).size() != 10946) return "|fib_string(20)| != 10946";
  return {};
}

std::string check_replace_footnote() {
  WorkingSequence t = WorkingSequence::from_text("aaaaa");
  const uint32_t head = t.add_pair_head({0, 0});
  const size_t replaced = t.replace({0, 0}, head, RuleFlag::Major);
  if (replaced != 2) return "expected 2 replacements, got " + std::to_string(replaced);
  if (t.size() != 3 || t.symbol_at(0) != head || t.symbol_at(1) != head ||
      t.symbol_at(2) != 0)
    return "token sequence is not (head, head, a)";
  return {};
}

std::string check_universal_round_trip() {
  const unsigned kinds[] = {0, 1, 8};
  for (int i = 0; i < 200; ++i) {
    const unsigned m = 5 + static_cast<unsigned>(i % 16);
    const unsigned kind = kinds[i % 3];
    const double ratio = 0.05 * static_cast<double>(i % 5);
    const NoisyFibText noisy =
        add_noise(m, {.k = kind, .ratio = ratio, .seed = 31000 + uint64_t(i)});

    const auto verify = [&](Method method, const CompressParams& params) -> std::string {
      const CompressedArtifact art = compress(noisy.text, method, params);
      if (decompress_bytes(art.to_bytes()) != noisy.text) {
        std::ostringstream out;
        out << "case " << i << " (m=" << m << ", kind=" << kind << ", ratio=" << ratio
            << ", method byte " << int(method) << ") did not round trip";
        return out.str();
      }
      return {};
    };

    if (auto err = verify(Method::Repair, {}); !err.empty()) return err;
    if (auto err = verify(Method::PcfgRepair, {}); !err.empty()) return err;
    const auto err = kind == 0 ? verify(Method::FibG0, {.m = m})
                               : verify(Method::FibGk, {.m = m, .k = kind});
    if (!err.empty()) return err;
  }
  return {};
}

std::string check_chain_scaling() {
  std::vector<double> xs, ys;
  for (unsigned m = 8; m <= 20; ++m) {
    const CompressedArtifact art = unary_pcfg_compress(uint64_t{1} << m);
    xs.push_back(static_cast<double>(m));
    ys.push_back(8.0 * static_cast<double>(art.total_size()));
  }
  const size_t n = xs.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= double(n);
  my /= double(n);
  double cov = 0.0, var = 0.0;
  for (size_t i = 0; i < n; ++i) {
    cov += (xs[i] - mx) * (ys[i] - my);
    var += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = cov / var;
  if (slope > 16.0) {
    std::ostringstream out;
    out << "fitted slope " << slope << " bits per step exceeds 16";
    return out.str();
  }
  // Certify the affine upper bound constructively: the chord through the
  // endpoints must have slope <= 16, and no point may poke more than 16 bits
  // above it (raising the intercept by that slack completes the bound).
  const double chord_slope = (ys.back() - ys.front()) / (xs.back() - xs.front());
  if (chord_slope > 16.0) {
    std::ostringstream out;
    out << "endpoint growth " << chord_slope << " bits per step exceeds 16";
    return out.str();
  }
  for (size_t i = 0; i < n; ++i) {
    const double above = ys[i] - (ys.front() + chord_slope * (xs[i] - xs.front()));
    if (above > 16.0) {
      std::ostringstream out;
      out << "size at exponent " << xs[i] << " sits " << above
          << " bits above the affine envelope";
      return out.str();
    }
  }
  const size_t chain_bytes = unary_pcfg_compress(uint64_t{1} << 20).total_size();
  const size_t slp_bytes = serialize_grammar(doubling_slp(20)).size();
  if (chain_bytes >= slp_bytes) {
    std::ostringstream out;
    out << "chain artifact (" << chain_bytes << " B) is not smaller than the doubling "
        << "grammar (" << slp_bytes << " B)";
    return out.str();
  }
  return {};
}

std::string check_static_coding_bound() {
  std::mt19937_64 rng(987654321);
  for (int iter = 0; iter < 100; ++iter) {
    const uint32_t alphabet = 2 + static_cast<uint32_t>(rng() % 63);
    std::vector<double> probs(alphabet);
    double sum = 0.0;
    for (double& p : probs) {
      p = 1.0 + static_cast<double>(rng() % 99);
      sum += p;
    }
    for (double& p : probs) p /= sum;

    const size_t len = 1 + rng() % 4096;
    std::vector<uint32_t> symbols(len);
    double bits = 0.0;
    for (uint32_t& s : symbols) {
      double u = static_cast<double>(rng() % (1u << 30)) / double(1u << 30);
      s = alphabet - 1;
      for (uint32_t j = 0; j < alphabet; ++j) {
        if (u < probs[j]) {
          s = j;
          break;
        }
        u -= probs[j];
      }
      bits -= std::log2(probs[s]);
    }
    const std::vector<uint8_t> payload =
        rc_encode(symbols, FrequencyModel::from_probabilities(probs));
    if (8.0 * static_cast<double>(payload.size()) > std::ceil(bits) + 64.0) {
      std::ostringstream out;
      out << "sequence " << iter << ": " << 8 * payload.size()
          << " payload bits exceed ceil(" << bits << ") + 64";
      return out.str();
    }
  }
  return {};
}

std::string check_clean_string_artifact() {
  const std::string text = fib_string(20);
  const CompressedArtifact art = compress(text, Method::FibG0, {.m = 20});
  if (art.total_size() >= 64) {
    return "artifact is " + std::to_string(art.total_size()) + " bytes, expected < 64";
  }
  const double ratio =
      static_cast<double>(art.total_size()) / static_cast<double>(text.size());
  if (ratio >= 0.006)
    return "compression ratio " + std::to_string(ratio) + " is not below 0.6%";
  if (decompress(art) != text) return "clean-string artifact did not round trip";
  return {};
}

std::string check_benchmark_trends() {
  BenchConfig config;
  config.m = 20;
  config.trials = 10;
  config.seed_base = 0;
  config.methods = {"repair", "pcfg-repair", "fib-g0", "fib-gk"};
  config.type0_ratios = {0.001, 0.01, 0.05};
  config.type1_ratios = {0.001};
  config.k_values = {12, 24};
  config.k_ratio = 0.001;

  const BenchResult result = run_bench(config);

  // average compressed size keyed by (kind, method, ratio, k)
  std::map<std::string, double> avg;
  const auto key = [](const std::string& kind, const std::string& method, double ratio,
                      unsigned k) {
    std::ostringstream out;
    out << kind << '|' << method << '|' << ratio << '|' << k;
    return out.str();
  };
  for (const BenchRecord& row : result.rows)
    if (row.is_average)
      avg[key(row.noise_kind, row.method, row.noise_ratio, row.k)] = row.compressed_size;
  const auto get = [&](const std::string& kind, const std::string& method, double ratio,
                       unsigned k) {
    const auto it = avg.find(key(kind, method, ratio, k));
    if (it == avg.end()) throw Error("missing average row: " + key(kind, method, ratio, k));
    return it->second;
  };

  {
    const double fib = get("typek", "fib-gk", 0.001, 1);
    const double pcfg = get("typek", "pcfg-repair", 0.001, 1);
    const double classic = get("typek", "repair", 0.001, 1);
    if (!(fib < pcfg)) {
      std::ostringstream out;
      out << "one-letter noise at 0.1%: fib-gk mean " << fib
          << " is not below pcfg-repair mean " << pcfg;
      return out.str();
    }
    if (!(pcfg <= classic)) {
      std::ostringstream out;
      out << "one-letter noise at 0.1%: pcfg-repair mean " << pcfg
          << " exceeds repair mean " << classic;
      return out.str();
    }
  }

  for (const double ratio : config.type0_ratios) {
    const double fib = get("type0", "fib-g0", ratio, 0);
    const double pcfg = get("type0", "pcfg-repair", ratio, 0);
    const double classic = get("type0", "repair", ratio, 0);
    if (!(fib < pcfg && fib < classic)) {
      std::ostringstream out;
      out << "flip noise at ratio " << ratio << ": fib-g0 mean " << fib
          << " is not the minimum (pcfg-repair " << pcfg << ", repair " << classic << ")";
      return out.str();
    }
  }

  for (const unsigned k : config.k_values) {
    const double pcfg = get("typek", "pcfg-repair", 0.001, k);
    const double classic = get("typek", "repair", 0.001, k);
    const double gap = std::abs(pcfg - classic) / classic;
    if (gap > 0.05) {
      std::ostringstream out;
      out << "letter noise with k=" << k << ": relative gap " << gap
          << " between pcfg-repair (" << pcfg << ") and repair (" << classic
          << ") exceeds 5%";
      return out.str();
    }
  }
  return {};
}

std::string check_classic_subsumption() {
  std::mt19937_64 rng(24680);
  int accepted = 0;
  int attempts = 0;
  while (accepted < 50 && attempts < 20000) {
    ++attempts;
    const size_t len = 5 + rng() % 56;
    const unsigned alphabet = 2 + static_cast<unsigned>(rng() % 5);
    std::string text(len, 'a');
    for (char& c : text) c = static_cast<char>('a' + rng() % alphabet);

    const RepairPcfgResult r = repair_pcfg(text);
    bool has_minor = false;
    for (uint32_t h = 0; h < r.grammar.nonterminal_count(); ++h)
      if (r.grammar.rules(h).size() > 1) has_minor = true;
    if (has_minor) continue;

    ++accepted;
    if (!r.flags.empty())
      return "string \"" + text + "\" has no two-rule head but non-empty flags";
    if (r.grammar != repair_classic(text))
      return "string \"" + text + "\" produced different grammars";
  }
  if (accepted < 50) {
    return "only " + std::to_string(accepted) +
           " of 50 minor-free strings found in 20000 attempts";
  }
  return {};
}

}  // namespace

int main() {
  criterion(1, "worked-example grammar fidelity", 0.001, check_example_grammar);
  criterion(2, "fibonacci string facts", 0.001, check_fibonacci_facts);
  criterion(3, "run-of-five replacement tokens", 0.001, check_replace_footnote);
  criterion(4, "universal compress/decompress round trip", 60.0, check_universal_round_trip);
  criterion(5, "single-letter chain scaling", 10.0, check_chain_scaling);
  criterion(6, "static coding stays near information content", 10.0,
            check_static_coding_bound);
  criterion(7, "clean fibonacci artifact under 64 bytes", 1.0, check_clean_string_artifact);
  criterion(8, "benchmark size trends", 300.0, check_benchmark_trends);
  criterion(9, "single-rule agreement on minor-free strings", 10.0,
            check_classic_subsumption);

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criterion(s) failed\n", g_failures);
  }
  return g_failures;
}
