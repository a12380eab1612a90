#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pcfgc/bench.hpp"
#include "pcfgc/container.hpp"
#include "pcfgc/errors.hpp"
#include "pcfgc/fibonacci.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw pcfgc::Error("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw pcfgc::Error("cannot write file: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw pcfgc::Error("cannot write file: " + path);
}

// --noise takes "0" (flip noise), "k"/"K" (fresh letters, count from --k),
// or a positive integer naming the letter count directly.
unsigned resolve_noise(const std::string& noise, unsigned k_flag) {
  if (noise == "0") {
    if (k_flag != 0) throw pcfgc::Error("--k is meaningless with --noise 0");
    return 0;
  }
  if (noise == "k" || noise == "K") {
    if (k_flag < 1) throw pcfgc::Error("--noise k requires --k >= 1");
    return k_flag;
  }
  try {
    size_t used = 0;
    const unsigned long v = std::stoul(noise, &used);
    if (used == noise.size() && v >= 1 && v <= 153) {
      if (k_flag != 0 && k_flag != v)
        throw pcfgc::Error("--noise and --k disagree");
      return static_cast<unsigned>(v);
    }
  } catch (const pcfgc::Error&) {
    throw;
  } catch (const std::exception&) {
  }
  throw pcfgc::Error("--noise must be 0, k, or an integer in [1, 153]");
}

pcfgc::Method method_from_name(const std::string& name) {
  if (name == "repair") return pcfgc::Method::Repair;
  if (name == "pcfg-repair") return pcfgc::Method::PcfgRepair;
  if (name == "fib-g0") return pcfgc::Method::FibG0;
  if (name == "fib-gk") return pcfgc::Method::FibGk;
  if (name == "unary") return pcfgc::Method::Unary;
  throw pcfgc::Error("unknown method: " + name);
}

pcfgc::BenchConfig default_bench_config() {
  pcfgc::BenchConfig config;
  config.methods = {"repair", "pcfg-repair", "fib-g0", "fib-gk"};
  config.type0_ratios = {0.0, 0.001, 0.01, 0.05, 0.1, 0.2};
  config.type1_ratios = {0.0, 0.001, 0.01, 0.05, 0.1, 0.2};
  for (unsigned k = 1; k <= 24; ++k) config.k_values.push_back(k);
  return config;
}

int run(int argc, char** argv) {
  CLI::App app{"grammar-based compression toolkit"};
  app.require_subcommand(1);

  // gen
  unsigned gen_m = 20;
  std::string gen_noise = "0";
  unsigned gen_k = 0;
  double gen_ratio = 0.0;
  uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "generate a noisy Fibonacci string");
  gen->add_option("--m", gen_m, "Fibonacci index");
  gen->add_option("--noise", gen_noise, "noise family: 0 | k | letter count");
  gen->add_option("--k", gen_k, "fresh-letter count for --noise k");
  gen->add_option("--ratio", gen_ratio, "fraction of positions altered");
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--out", gen_out, "output path")->required();

  // compress
  std::string c_method, c_in, c_out;
  unsigned c_m = 0, c_k = 0;
  uint64_t c_n = 0;
  auto* comp = app.add_subcommand("compress", "compress a file");
  comp->add_option("--method", c_method,
                   "repair | pcfg-repair | fib-g0 | fib-gk | unary")
      ->required();
  comp->add_option("--m", c_m, "Fibonacci index (fib-g0 / fib-gk)");
  comp->add_option("--k", c_k, "fresh-letter count (fib-gk)");
  comp->add_option("--n", c_n, "text length (unary; defaults to file size)");
  comp->add_option("--in", c_in, "input path")->required();
  comp->add_option("--out", c_out, "output path")->required();

  // decompress
  std::string d_in, d_out;
  auto* dec = app.add_subcommand("decompress", "restore a compressed file");
  dec->add_option("--in", d_in, "input path")->required();
  dec->add_option("--out", d_out, "output path")->required();

  // bench
  std::string b_config, b_csv, b_external;
  auto* bench = app.add_subcommand("bench", "run the benchmark sweeps");
  bench->add_option("--config", b_config, "key=value config file");
  bench->add_option("--csv", b_csv, "CSV output path")->required();
  bench->add_option("--external", b_external,
                    "comma-separated external compressors");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    pcfgc::NoiseSpec spec;
    spec.k = resolve_noise(gen_noise, gen_k);
    spec.ratio = gen_ratio;
    spec.seed = gen_seed;
    const pcfgc::NoisyFibText noisy = pcfgc::add_noise(gen_m, spec);
    write_file(gen_out, noisy.text);
    std::cout << "wrote " << gen_out << ": " << noisy.text.size() << " bytes, "
              << noisy.altered_positions.size() << " altered positions\n";
    return 0;
  }

  if (comp->parsed()) {
    const std::string text = read_file(c_in);
    const pcfgc::Method method = method_from_name(c_method);
    pcfgc::CompressParams params;
    params.m = c_m;
    params.k = c_k;
    params.n = c_n;
    if (method == pcfgc::Method::Unary && c_n == 0) params.n = text.size();
    if ((method == pcfgc::Method::FibG0 || method == pcfgc::Method::FibGk) &&
        c_m == 0)
      throw pcfgc::Error("--m is required for fib methods");
    if (method == pcfgc::Method::FibGk && c_k == 0)
      throw pcfgc::Error("--k is required for fib-gk");
    const pcfgc::CompressedArtifact art = pcfgc::compress(text, method, params);
    const std::vector<uint8_t> bytes = art.to_bytes();
    write_file(c_out,
               std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                bytes.size()));
    std::cout << text.size() << " -> " << bytes.size() << " bytes";
    if (!text.empty())
      std::cout << " (ratio "
                << static_cast<double>(bytes.size()) /
                       static_cast<double>(text.size())
                << ")";
    std::cout << "\n";
    return 0;
  }

  if (dec->parsed()) {
    const std::string bytes = read_file(d_in);
    const std::string text = pcfgc::decompress_bytes(std::span<const uint8_t>(
        reinterpret_cast<const uint8_t*>(bytes.data()), bytes.size()));
    write_file(d_out, text);
    std::cout << bytes.size() << " -> " << text.size() << " bytes\n";
    return 0;
  }

  if (bench->parsed()) {
    pcfgc::BenchConfig config = b_config.empty()
                                    ? default_bench_config()
                                    : pcfgc::BenchConfig::from_file(b_config);
    if (!b_external.empty()) {
      std::istringstream list(b_external);
      std::string item;
      while (std::getline(list, item, ','))
        if (!item.empty()) config.external.push_back(item);
    }
    const pcfgc::BenchResult result = pcfgc::run_bench(config);
    pcfgc::write_csv(b_csv, result);
    std::cout << "wrote " << b_csv << ": " << result.rows.size() << " rows\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
