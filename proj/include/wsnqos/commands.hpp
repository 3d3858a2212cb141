// Copyright 2026 The wsnqos Authors.
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

// The run, sweep and loadcheck commands behind the wsnqos executable. Each
// returns a process exit code and never throws.

#ifndef WSNQOS_COMMANDS_HPP
#define WSNQOS_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace wsnqos {

enum ExitCode : int {
  kExitOk = 0,
  kExitParseError = 1,
  kExitInvalidParameters = 2,
  kExitInternalError = 3,
};

inline constexpr const char* kTableFile = "table.txt";
inline constexpr const char* kReportFile = "report.json";
inline constexpr const char* kSweepFile = "sweep.csv";

struct RunOptions {
  std::filesystem::path scenario;
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;
};

// Writes table.txt and report.json under `out` and echoes the table to `log`.
int cmd_run(const RunOptions& options, std::ostream& log, std::ostream& err);

struct SweepOptions {
  std::filesystem::path scenario;
  std::filesystem::path out;
  std::string axis;
  std::string values;
  int replications = 20;
  std::optional<std::uint64_t> seed;
};

// Writes sweep.csv under `out` and echoes it to `log`.
int cmd_sweep(const SweepOptions& options, std::ostream& log,
              std::ostream& err);

struct LoadcheckOptions {
  std::filesystem::path scenario;
  std::optional<std::uint64_t> seed;
};

// Prints L_max and the overload flag. Overload is a finding, so it still
// exits 0.
int cmd_loadcheck(const LoadcheckOptions& options, std::ostream& log,
                  std::ostream& err);

}  // namespace wsnqos

#endif  // WSNQOS_COMMANDS_HPP
