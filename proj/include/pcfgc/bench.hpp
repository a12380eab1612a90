#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pcfgc {

// Benchmark plan: three sweeps over noisy Fibonacci text at a fixed m.
//   - flip noise (type0) across type0_ratios,
//   - one-letter noise (typek, k=1) across type1_ratios,
//   - k-letter noise (typek) across k_values at the fixed k_ratio.
// Per parameter point each applicable method runs `trials` times with seeds
// seed_base + trial. Methods: repair, pcfg-repair, fib-g0 (type0 sweeps),
// fib-gk (typek sweeps). External commands are measured by piping the raw
// text through `<cmd> -c` and counting output bytes.
struct BenchConfig {
  unsigned m = 20;
  unsigned trials = 10;
  uint64_t seed_base = 0;
  std::vector<std::string> methods;
  std::vector<double> type0_ratios;
  std::vector<double> type1_ratios;
  std::vector<unsigned> k_values;
  double k_ratio = 0.001;
  std::vector<std::string> external;

  // key=value lines; '#' starts a comment; lists are comma-separated.
  static BenchConfig parse(std::string_view text);
  static BenchConfig from_file(const std::string& path);
};

struct BenchRecord {
  std::string method;
  std::string noise_kind;  // "type0" or "typek"
  double noise_ratio = 0.0;
  unsigned k = 0;
  bool is_average = false;
  uint64_t seed = 0;  // unset for average rows
  double original_size = 0.0;
  double compressed_size = 0.0;
  double ratio_value = 0.0;  // compressed / original
  std::string note;          // non-empty for warning rows
};

struct BenchResult {
  std::vector<std::string> header_notes;  // emitted as '#' comment lines
  std::vector<BenchRecord> rows;
};

// Runs the plan. Internal methods are round-trip verified before a row is
// recorded; a missing external tool yields one warning row and is skipped.
// Identical configs produce identical results apart from external-tool rows.
BenchResult run_bench(const BenchConfig& config);

std::string to_csv(const BenchResult& result);
void write_csv(const std::string& path, const BenchResult& result);

}  // namespace pcfgc
