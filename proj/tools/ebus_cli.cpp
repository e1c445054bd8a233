// Copyright 2026 The EBUS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ebus/harness.hpp"
#include "json.hpp"

namespace {

constexpr int kExitUsage = 2;

struct OutputTarget {
  std::ostream* stream = &std::cout;
  std::ofstream file;

  bool open(const std::string& path) {
    if (path.empty()) return true;
    file.open(path);
    if (!file) return false;
    stream = &file;
    return true;
  }
};

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool parse_sizes(const std::vector<std::string>& raw, std::vector<uint64_t>& out) {
  out.clear();
  for (const std::string& tok : raw) {
    try {
      size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size() || !(v >= 1.0) || v > 9e18 ||
          v != std::floor(v))
        return false;
      out.push_back(static_cast<uint64_t>(v));
    } catch (const std::exception&) {
      return false;
    }
  }
  return !out.empty();
}

int emit_decay(const ebus::DecayConfig& cfg, OutputTarget& out, bool json) {
  const auto rows = ebus::run_decay(cfg);
  if (json) {
    for (const auto& r : rows) {
      nlohmann::json obj{{"step", r.step}, {"jsd", r.jsd}, {"chi2_p", r.chi2_p}};
      *out.stream << obj.dump() << '\n';
    }
  } else {
    *out.stream << "step,jsd,chi2_p\n";
    for (const auto& r : rows)
      *out.stream << r.step << ',' << fmt_double(r.jsd) << ','
                  << fmt_double(r.chi2_p) << '\n';
  }
  return 0;
}

int emit_bench(const ebus::BenchConfig& cfg, OutputTarget& out, bool json) {
  const auto rows = ebus::run_bench(cfg);
  if (json) {
    for (const auto& r : rows) {
      nlohmann::json obj{{"scenario", r.scenario},
                         {"size", r.size},
                         {"median_ns_per_iter", r.median_ns_per_iter}};
      *out.stream << obj.dump() << '\n';
    }
  } else {
    *out.stream << "scenario,size,median_ns_per_iter\n";
    for (const auto& r : rows)
      *out.stream << r.scenario << ',' << r.size << ','
                  << fmt_double(r.median_ns_per_iter) << '\n';
  }
  return 0;
}

int emit_selftest(uint64_t seed) {
  const ebus::SelftestReport report = ebus::run_selftest(seed);
  for (const auto& suite : report.suites) {
    std::cout << "[selftest] " << suite.name << ": " << suite.checks
              << " checks, " << suite.failures << " failures";
    if (suite.failures != 0) std::cout << " (" << suite.first_failure << ")";
    std::cout << '\n';
  }
  std::cout << "[selftest] " << (report.passed() ? "PASS" : "FAIL") << '\n';
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ebus: exact dynamic weighted sampling over IEEE-754 doubles"};
  app.require_subcommand(1);

  ebus::DecayConfig decay;
  std::string decay_out;
  std::string decay_format = "csv";
  auto* decay_cmd = app.add_subcommand(
      "decay", "weight-decay accuracy experiment (CSV/JSON rows: step,jsd,chi2_p)");
  decay_cmd->add_option("--n", decay.items, "number of items")->check(CLI::Range(uint64_t(2), uint64_t(100000)));
  decay_cmd->add_option("--steps", decay.steps, "decay steps");
  decay_cmd->add_option("--draws", decay.draws_per_step, "samples per step");
  decay_cmd->add_option("--seed", decay.seed, "RNG seed");
  decay_cmd->add_option("--out", decay_out, "write rows to a file instead of stdout");
  decay_cmd->add_option("--format", decay_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  std::string bench_scenario;
  std::vector<std::string> bench_sizes;
  ebus::BenchConfig bench;
  std::string bench_out;
  std::string bench_format = "csv";
  auto* bench_cmd = app.add_subcommand(
      "bench", "latency benchmarks (CSV/JSON rows: scenario,size,median_ns_per_iter)");
  bench_cmd->add_option("--scenario", bench_scenario, "static, fixed, decreasing or increasing")
      ->required();
  bench_cmd->add_option("--sizes", bench_sizes, "comma-separated sizes, e.g. 1e3,1e4")
      ->delimiter(',');
  bench_cmd->add_option("--repeats", bench.repeats,
                        "timed repetitions per size (0 = 50 below 1e6, else 5)");
  bench_cmd->add_option("--seed", bench.seed, "RNG seed");
  bench_cmd->add_option("--out", bench_out, "write rows to a file instead of stdout");
  bench_cmd->add_option("--format", bench_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  uint64_t selftest_seed = 1;
  auto* selftest_cmd =
      app.add_subcommand("selftest", "run the built-in verification suites");
  selftest_cmd->add_option("--seed", selftest_seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (decay_cmd->parsed()) {
      OutputTarget out;
      if (!out.open(decay_out)) {
        std::cerr << "ebus: cannot open " << decay_out << '\n';
        return kExitUsage;
      }
      return emit_decay(decay, out, decay_format == "json");
    }
    if (bench_cmd->parsed()) {
      if (!parse_scenario(bench_scenario, bench.scenario)) {
        std::cerr << "ebus: unknown scenario '" << bench_scenario << "'\n";
        return kExitUsage;
      }
      if (!bench_sizes.empty() && !parse_sizes(bench_sizes, bench.sizes)) {
        std::cerr << "ebus: invalid --sizes list\n";
        return kExitUsage;
      }
      OutputTarget out;
      if (!out.open(bench_out)) {
        std::cerr << "ebus: cannot open " << bench_out << '\n';
        return kExitUsage;
      }
      return emit_bench(bench, out, bench_format == "json");
    }
    return emit_selftest(selftest_seed);
  } catch (const std::exception& e) {
    std::cerr << "ebus: " << e.what() << '\n';
    return kExitUsage;
  }
}
