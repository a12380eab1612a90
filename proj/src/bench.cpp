#include "pcfgc/bench.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pcfgc/container.hpp"
#include "pcfgc/errors.hpp"
#include "pcfgc/fibonacci.hpp"

namespace pcfgc {

namespace {

const std::vector<std::string> kInternalMethods = {"repair", "pcfg-repair",
                                                   "fib-g0", "fib-gk"};

std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos <= value.size()) {
    const size_t comma = value.find(',', pos);
    const std::string_view piece =
        comma == std::string_view::npos ? value.substr(pos)
                                        : value.substr(pos, comma - pos);
    const std::string item = trim(piece);
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

double parse_double(const std::string& value, const std::string& key) {
  try {
    size_t used = 0;
    const double d = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing text");
    return d;
  } catch (const std::exception&) {
    throw Error("bad numeric value for config key '" + key + "': " + value);
  }
}

uint64_t parse_u64(const std::string& value, const std::string& key) {
  try {
    size_t used = 0;
    const uint64_t v = std::stoull(value, &used);
    if (used != value.size() || value.find('-') != std::string::npos)
      throw std::invalid_argument("not a plain non-negative integer");
    return v;
  } catch (const std::exception&) {
    throw Error("bad integer value for config key '" + key + "': " + value);
  }
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Runs `command` under the shell, returns stdout byte count.
uint64_t run_count_stdout(const std::string& command) {
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) throw Error("cannot launch: " + command);
  uint64_t count = 0;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) count += got;
  const int status = pclose(pipe);
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0)
    throw Error("command failed: " + command);
  return count;
}

std::string first_output_line(const std::string& command) {
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return {};
  std::string line;
  int c;
  while ((c = fgetc(pipe)) != EOF && c != '\n') line += static_cast<char>(c);
  while (fgetc(pipe) != EOF) {  // drain so the tool is not killed mid-write
  }
  pclose(pipe);
  return line;
}

bool tool_available(const std::string& command) {
  const std::string word = command.substr(0, command.find(' '));
  const std::string probe = "command -v " + word + " >/dev/null 2>&1";
  const int status = std::system(probe.c_str());
  return status != -1 && WIFEXITED(status) && WEXITSTATUS(status) == 0;
}

class TempFile {
 public:
  explicit TempFile(std::string_view content) {
    char name[] = "/tmp/pcfgc-bench-XXXXXX";
    const int fd = mkstemp(name);
    if (fd == -1) throw Error("cannot create temporary file");
    path_ = name;
    size_t off = 0;
    while (off < content.size()) {
      const ssize_t wrote = write(fd, content.data() + off, content.size() - off);
      if (wrote <= 0) {
        close(fd);
        unlink(path_.c_str());
        throw Error("cannot write temporary file");
      }
      off += static_cast<size_t>(wrote);
    }
    close(fd);
  }
  ~TempFile() { unlink(path_.c_str()); }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct SweepPoint {
  std::string noise_kind;  // "type0" or "typek"
  double ratio = 0.0;
  unsigned k = 0;  // 0 for type0
};

bool method_applies(const std::string& method, const SweepPoint& point) {
  if (method == "repair" || method == "pcfg-repair") return true;
  if (method == "fib-g0") return point.noise_kind == "type0";
  if (method == "fib-gk") return point.noise_kind == "typek";
  return false;
}

CompressedArtifact compress_for(const std::string& method, const std::string& text,
                                unsigned m, unsigned k) {
  if (method == "repair") return compress(text, Method::Repair);
  if (method == "pcfg-repair") return compress(text, Method::PcfgRepair);
  if (method == "fib-g0") return compress(text, Method::FibG0, {.m = m});
  if (method == "fib-gk") return compress(text, Method::FibGk, {.m = m, .k = k});
  throw Error("unknown method: " + method);
}

}  // namespace

BenchConfig BenchConfig::parse(std::string_view text) {
  BenchConfig config;
  config.methods = kInternalMethods;
  size_t pos = 0;
  unsigned line_no = 0;
  while (pos <= text.size()) {
    ++line_no;
    const size_t nl = text.find('\n', pos);
    std::string_view line =
        nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
    const size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string stripped = trim(line);
    if (!stripped.empty()) {
      const size_t eq = stripped.find('=');
      if (eq == std::string::npos)
        throw Error("config line " + std::to_string(line_no) + " is not key=value");
      const std::string key = trim(std::string_view(stripped).substr(0, eq));
      const std::string value = trim(std::string_view(stripped).substr(eq + 1));
      if (key == "m") {
        config.m = static_cast<unsigned>(parse_u64(value, key));
      } else if (key == "trials") {
        config.trials = static_cast<unsigned>(parse_u64(value, key));
      } else if (key == "seed_base") {
        config.seed_base = parse_u64(value, key);
      } else if (key == "methods") {
        config.methods = split_list(value);
      } else if (key == "type0_ratios") {
        config.type0_ratios.clear();
        for (const auto& item : split_list(value))
          config.type0_ratios.push_back(parse_double(item, key));
      } else if (key == "type1_ratios") {
        config.type1_ratios.clear();
        for (const auto& item : split_list(value))
          config.type1_ratios.push_back(parse_double(item, key));
      } else if (key == "k_values") {
        config.k_values.clear();
        for (const auto& item : split_list(value))
          config.k_values.push_back(static_cast<unsigned>(parse_u64(item, key)));
      } else if (key == "k_ratio") {
        config.k_ratio = parse_double(value, key);
      } else if (key == "external") {
        config.external = split_list(value);
      } else {
        throw Error("unknown config key: " + key);
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return config;
}

BenchConfig BenchConfig::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

BenchResult run_bench(const BenchConfig& config) {
  if (config.m < 2) throw Error("bench requires m >= 2");
  if (config.trials < 1) throw Error("bench requires trials >= 1");
  if (config.methods.empty()) throw Error("bench requires a non-empty method list");
  for (const auto& method : config.methods)
    if (std::find(kInternalMethods.begin(), kInternalMethods.end(), method) ==
        kInternalMethods.end())
      throw Error("unknown method: " + method);
  for (const double r : config.type0_ratios)
    if (!(r >= 0.0 && r <= 1.0)) throw RatioOutOfRange("type0 ratio out of [0, 1]");
  for (const double r : config.type1_ratios)
    if (!(r >= 0.0 && r <= 1.0)) throw RatioOutOfRange("type1 ratio out of [0, 1]");
  if (!(config.k_ratio >= 0.0 && config.k_ratio <= 1.0))
    throw RatioOutOfRange("k_ratio out of [0, 1]");
  for (const unsigned k : config.k_values)
    if (k < 1 || k > 153) throw Error("k value out of range [1, 153]");

  BenchResult result;

  std::vector<std::string> externals;
  for (const auto& cmd : config.external) {
    if (!tool_available(cmd)) {
      BenchRecord row;
      row.method = cmd;
      row.note = "external tool not found; skipped";
      result.rows.push_back(row);
      continue;
    }
    externals.push_back(cmd);
    const std::string version =
        first_output_line(cmd + " --version </dev/null 2>&1");
    result.header_notes.push_back("external " + cmd + ": " +
                                  (version.empty() ? "(no version output)" : version));
  }

  std::vector<std::vector<SweepPoint>> sweeps;
  std::vector<SweepPoint> sweep;
  for (const double r : config.type0_ratios)
    sweep.push_back({"type0", r, 0});
  sweeps.push_back(std::move(sweep));
  sweep.clear();
  for (const double r : config.type1_ratios)
    sweep.push_back({"typek", r, 1});
  sweeps.push_back(std::move(sweep));
  sweep.clear();
  for (const unsigned k : config.k_values)
    sweep.push_back({"typek", config.k_ratio, k});
  sweeps.push_back(std::move(sweep));

  const auto text_for = [&](const SweepPoint& point, unsigned trial) {
    NoiseSpec spec;
    spec.k = point.k;
    spec.ratio = point.ratio;
    spec.seed = config.seed_base + trial;
    return add_noise(config.m, spec).text;
  };

  const auto emit_rows = [&](const std::string& method, const SweepPoint& point,
                             const std::vector<std::pair<uint64_t, uint64_t>>& sizes,
                             const std::string& note) {
    double sum_orig = 0.0, sum_comp = 0.0, sum_ratio = 0.0;
    for (unsigned trial = 0; trial < sizes.size(); ++trial) {
      const auto [orig, comp] = sizes[trial];
      BenchRecord row;
      row.method = method;
      row.noise_kind = point.noise_kind;
      row.noise_ratio = point.ratio;
      row.k = point.k;
      row.seed = config.seed_base + trial;
      row.original_size = static_cast<double>(orig);
      row.compressed_size = static_cast<double>(comp);
      row.ratio_value = static_cast<double>(comp) / static_cast<double>(orig);
      row.note = note;
      sum_orig += row.original_size;
      sum_comp += row.compressed_size;
      sum_ratio += row.ratio_value;
      result.rows.push_back(std::move(row));
    }
    BenchRecord avg;
    avg.method = method;
    avg.noise_kind = point.noise_kind;
    avg.noise_ratio = point.ratio;
    avg.k = point.k;
    avg.is_average = true;
    const double n = static_cast<double>(sizes.size());
    avg.original_size = sum_orig / n;
    avg.compressed_size = sum_comp / n;
    avg.ratio_value = sum_ratio / n;
    avg.note = note;
    result.rows.push_back(std::move(avg));
  };

  for (const auto& points : sweeps) {
    if (points.empty()) continue;
    for (const auto& method : config.methods) {
      for (const auto& point : points) {
        if (!method_applies(method, point)) continue;
        std::vector<std::pair<uint64_t, uint64_t>> sizes;
        for (unsigned trial = 0; trial < config.trials; ++trial) {
          const std::string text = text_for(point, trial);
          const CompressedArtifact art =
              compress_for(method, text, config.m, point.k);
          if (decompress(art) != text)
            throw Error("round trip failed for method " + method);
          sizes.emplace_back(text.size(), art.total_size());
        }
        const std::string note = (method == "fib-g0" || method == "fib-gk")
                                     ? "grammar carried as (m, k) header"
                                     : "";
        emit_rows(method, point, sizes, note);
      }
    }
    for (const auto& cmd : externals) {
      for (const auto& point : points) {
        std::vector<std::pair<uint64_t, uint64_t>> sizes;
        for (unsigned trial = 0; trial < config.trials; ++trial) {
          const std::string text = text_for(point, trial);
          TempFile file(text);
          const uint64_t comp =
              run_count_stdout(cmd + " -c < '" + file.path() + "'");
          sizes.emplace_back(text.size(), comp);
        }
        emit_rows(cmd, point, sizes, "");
      }
    }
  }
  return result;
}

std::string to_csv(const BenchResult& result) {
  std::string out;
  for (const auto& note : result.header_notes) out += "# " + note + "\n";
  out += "method,noise_kind,noise_ratio,k,seed,original_size,compressed_size,ratio_value,note\n";
  for (const auto& row : result.rows) {
    out += csv_escape(row.method);
    out += ',';
    out += row.noise_kind;
    out += ',';
    out += format_number(row.noise_ratio);
    out += ',';
    out += std::to_string(row.k);
    out += ',';
    out += row.is_average ? "avg" : std::to_string(row.seed);
    out += ',';
    out += format_number(row.original_size);
    out += ',';
    out += format_number(row.compressed_size);
    out += ',';
    out += format_number(row.ratio_value);
    out += ',';
    out += csv_escape(row.note);
    out += '\n';
  }
  return out;
}

void write_csv(const std::string& path, const BenchResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write CSV file: " + path);
  out << to_csv(result);
  if (!out) throw Error("cannot write CSV file: " + path);
}

}  // namespace pcfgc
