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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "coopbeam/config.hpp"

namespace coopbeam {

inline constexpr const char* kCsvHeader =
    "arch,sweep_name,sweep_value,trial,seed,iterations,sum_rate_bpshz,p_tot_mw,ee_bpshzw";

struct SweepResult {
  Architecture arch = Architecture::kFullyDigital;
  std::string sweep_name;
  double sweep_value = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  int iterations = 0;
  double sum_rate = 0.0;   // bits/s/Hz
  double total_power = 0.0;  // mW
  double ee = 0.0;         // bits/s/Hz/W
  int error_code = 0;      // 0 on success, else Error::Code of the failure
  std::vector<double> trace;
};

/// Seed of one trial. Shared by every architecture so they see the same channels.
std::uint64_t trial_seed(std::uint64_t master, std::size_t value_index, int trial);

/// One trial: scenario, association, BCD. Failures are caught and recorded.
SweepResult run_trial(const RunConfig& cfg, Architecture arch, std::size_t value_index, int trial);

/// All architectures x sweep values x trials, sorted by (arch, value, trial).
std::vector<SweepResult> run_sweep(const RunConfig& cfg);

/// Failed rows carry nan rates and iterations = -error_code.
void write_csv(std::ostream& out, const std::vector<SweepResult>& rows);
void write_csv(const std::string& path, const std::vector<SweepResult>& rows);
std::vector<SweepResult> read_csv(std::istream& in);

/// Long-format f_o traces: arch,sweep_value,trial,iteration,f_o.
void write_trace_csv(std::ostream& out, const std::vector<SweepResult>& rows);

}  // namespace coopbeam
