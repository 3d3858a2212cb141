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

#include "wsnqos/commands.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <system_error>

#include "wsnqos/qos.hpp"
#include "wsnqos/scenario_io.hpp"
#include "wsnqos/sim.hpp"

namespace wsnqos {
namespace {

// Output directory problems are reported like bad parameters.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_file(const std::filesystem::path& dir, const char* name,
                const std::string& text) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::filesystem::path path = dir / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) throw OutputError("cannot write " + path.string());
}

ScenarioParams load(const std::filesystem::path& path,
                    std::optional<std::uint64_t> seed) {
  ScenarioParams p = load_scenario(path);
  if (seed) p.seed = *seed;
  return p;
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    body();
    return kExitOk;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const OutputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidParameters;
  } catch (const std::invalid_argument& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return kExitInvalidParameters;
  } catch (const ConsistencyError& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
}

}  // namespace

int cmd_run(const RunOptions& options, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioParams params = load(options.scenario, options.seed);
    const RunReport report = run(params);
    const std::string table = format_table(params, report);
    write_file(options.out, kTableFile, table);
    write_file(options.out, kReportFile, report_to_json(params, report));
    log << table;
    for (const std::string& d : report.diagnostics) err << d << "\n";
  });
}

int cmd_sweep(const SweepOptions& options, std::ostream& log,
              std::ostream& err) {
  return guarded(err, [&] {
    SweepAxis axis;
    if (options.axis == "threshold") {
      axis = SweepAxis::kThreshold;
    } else if (options.axis == "lambda") {
      axis = SweepAxis::kLambda;
    } else {
      throw ParseError("axis must be 'threshold' or 'lambda'");
    }
    const auto values = parse_axis_values(options.values);
    const ScenarioParams params = load(options.scenario, options.seed);
    const SweepResult result =
        sweep(params, axis, values, options.replications);
    const std::string csv = sweep_to_csv(result);
    write_file(options.out, kSweepFile, csv);
    log << csv;
  });
}

int cmd_loadcheck(const LoadcheckOptions& options, std::ostream& log,
                  std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioParams params = load(options.scenario, options.seed);
    const Scenario scenario = generate_scenario(params);
    const LoadLpResult r = solve_load_lp(scenario.net, scenario.requests);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", r.l_max);
    log << "L_max = " << buf << (r.overloaded ? "  OVERLOADED" : "  ok")
        << "\n";
  });
}

}  // namespace wsnqos
