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

#include "coopbeam/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace coopbeam {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

enum Stream : std::uint64_t { kScenarioStream = 1, kSolverStream = 2 };

}  // namespace

std::uint64_t trial_seed(std::uint64_t master, std::size_t value_index, int trial) {
  return Rng::derive(Rng::derive(master, value_index), static_cast<std::uint64_t>(trial));
}

SweepResult run_trial(const RunConfig& cfg, Architecture arch, std::size_t value_index, int trial) {
  SweepResult r;
  r.arch = arch;
  r.sweep_name = std::string(to_string(cfg.sweep));
  r.sweep_value = cfg.sweep_values.at(value_index);
  r.trial = trial;
  r.seed = trial_seed(cfg.seed, value_index, trial);
  try {
    const ScenarioConfig sc = cfg.scenario_at(r.sweep_value);
    const Rng root(r.seed);
    Rng scenario_rng = root.child(kScenarioStream);
    const auto [scn, channels] = generate_scenario(sc, scenario_rng);
    r.total_power = hardware_power(arch, scn, cfg.power);
    const Association assoc = stable_match(channels, scn);
    Rng solver_rng = root.child(kSolverStream);
    BcdResult res = bcd_solve(arch, channels, assoc, scn, solver_rng, cfg.bcd);
    r.iterations = res.iterations;
    r.sum_rate = res.sum_rate;
    r.ee = r.sum_rate / (r.total_power / 1000.0);
    r.trace = std::move(res.trace);
  } catch (const Error& e) {
    r.error_code = static_cast<int>(e.code());
  } catch (const std::exception&) {
    r.error_code = static_cast<int>(Error::Code::kNumerical);
  }
  if (r.error_code != 0) {
    r.iterations = -r.error_code;
    r.sum_rate = std::numeric_limits<double>::quiet_NaN();
    r.ee = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

std::vector<SweepResult> run_sweep(const RunConfig& cfg) {
  cfg.validate();
  struct Job {
    Architecture arch;
    std::size_t value_index;
    int trial;
  };
  std::vector<Job> jobs;
  for (Architecture a : cfg.archs)
    for (std::size_t v = 0; v < cfg.sweep_values.size(); ++v)
      for (int t = 0; t < cfg.trials; ++t) jobs.push_back({a, v, t});

  std::vector<SweepResult> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++)
      rows[i] = run_trial(cfg, jobs[i].arch, jobs[i].value_index, jobs[i].trial);
  };
  const int n = std::min<int>(cfg.workers, static_cast<int>(jobs.size()));
  if (n <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(work);
  }
  // Job order is already (arch, value, trial); the sort keeps that explicit.
  std::stable_sort(rows.begin(), rows.end(), [](const SweepResult& a, const SweepResult& b) {
    if (a.arch != b.arch) return a.arch < b.arch;
    if (a.sweep_value != b.sweep_value) return a.sweep_value < b.sweep_value;
    return a.trial < b.trial;
  });
  return rows;
}

void write_csv(std::ostream& out, const std::vector<SweepResult>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << to_string(r.arch) << ',' << r.sweep_name << ',' << fmt(r.sweep_value) << ',' << r.trial << ','
        << r.seed << ',' << r.iterations << ',' << fmt(r.sum_rate) << ',' << fmt(r.total_power) << ','
        << fmt(r.ee) << '\n';
  }
}

void write_csv(const std::string& path, const std::vector<SweepResult>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("out: cannot open " + path);
  write_csv(out, rows);
}

std::vector<SweepResult> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw ConfigError("csv: header mismatch");
  std::vector<SweepResult> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 9) throw ConfigError("csv: expected 9 fields in '" + line + "'");
    SweepResult r;
    r.arch = parse_architecture(f[0]);
    r.sweep_name = f[1];
    r.sweep_value = std::stod(f[2]);
    r.trial = std::stoi(f[3]);
    r.seed = std::stoull(f[4]);
    r.iterations = std::stoi(f[5]);
    r.sum_rate = std::stod(f[6]);
    r.total_power = std::stod(f[7]);
    r.ee = std::stod(f[8]);
    r.error_code = r.iterations < 0 ? -r.iterations : 0;
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_trace_csv(std::ostream& out, const std::vector<SweepResult>& rows) {
  out << "arch,sweep_value,trial,iteration,f_o\n";
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.trace.size(); ++i)
      out << to_string(r.arch) << ',' << fmt(r.sweep_value) << ',' << r.trial << ',' << i << ',' << fmt(r.trace[i])
          << '\n';
}

}  // namespace coopbeam
