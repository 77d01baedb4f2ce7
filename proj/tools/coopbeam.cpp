// Copyright 2026 The coopbeam Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// coopbeam: Monte Carlo sweeps of cooperative hybrid beamforming.
//
//   coopbeam run --config cfg.json --seed 7 --trials 200 --arch fd,fc,fs,ds \
//       --sweep power --out rates.csv
//   coopbeam validate --config cfg.json

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coopbeam/sweep.hpp"

using namespace coopbeam;

namespace {

std::vector<Architecture> parse_arch_list(const std::string& text) {
  std::vector<Architecture> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!item.empty()) out.push_back(parse_architecture(item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative mmWave hybrid beamforming simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path, trace_path, arch_list = "fd,fc,fs,ds", sweep_name;
  std::uint64_t seed = 1;
  int trials = 200;
  int workers = 1;

  auto* run = app.add_subcommand("run", "Run a Monte Carlo sweep and write CSV");
  run->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Master seed");
  run->add_option("--trials", trials, "Trials per sweep value")->check(CLI::PositiveNumber);
  run->add_option("--arch", arch_list, "Comma-separated subset of fd,fc,fs,ds");
  run->add_option("--sweep", sweep_name, "power | antennas | rfchains (overrides config)")
      ->check(CLI::IsMember({"power", "antennas", "rfchains"}));
  run->add_option("--out", out_path, "Output CSV")->required();
  run->add_option("--trace-out", trace_path, "Optional f_o trace CSV");
  run->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "Parse and check a config");
  validate->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = load_config(config_path);
    if (validate->parsed()) {
      std::cout << "ok: sweep " << to_string(cfg.sweep) << " over " << cfg.sweep_values.size() << " values\n";
      return 0;
    }
    if (!sweep_name.empty()) {
      const SweepKind kind = parse_sweep(sweep_name);
      if (kind != cfg.sweep) cfg.sweep_values = default_sweep_values(kind);
      cfg.sweep = kind;
    }
    cfg.seed = seed;
    cfg.trials = trials;
    cfg.workers = workers;
    cfg.archs = parse_arch_list(arch_list);
    const auto rows = run_sweep(cfg);
    write_csv(out_path, rows);
    if (!trace_path.empty()) {
      std::ofstream t(trace_path, std::ios::binary);
      write_trace_csv(t, rows);
    }
    int failed = 0;
    for (const auto& r : rows) failed += r.error_code != 0;
    std::fprintf(stderr, "%zu rows, %d failed\n", rows.size(), failed);
    return 0;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return static_cast<int>(e.code());
  }
}
