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

#include "wsnqos/scenario_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace wsnqos {
namespace {

using Json = nlohmann::ordered_json;

const std::set<std::string> kScenarioKeys = {
    "n",         "region",       "distance_unit", "path_loss_exponent",
    "max_power", "bandwidth",    "request_rate",  "lambda_m",
    "hop_bound", "threshold",    "seed",          "positions",
    "requests"};

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(e.what());
  }
}

const Json& field(const Json& obj, const std::string& key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("missing key '" + key + "'");
  return *it;
}

double number(const Json& j, const std::string& what) {
  if (!j.is_number()) throw ParseError("'" + what + "' must be a number");
  return j.get<double>();
}

std::int64_t integer(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) {
    throw ParseError("'" + what + "' must be an integer");
  }
  return j.get<std::int64_t>();
}

int small_integer(const Json& j, const std::string& what) {
  const std::int64_t v = integer(j, what);
  if (v < -(1LL << 30) || v > (1LL << 30)) {
    throw ParseError("'" + what + "' is out of range");
  }
  return static_cast<int>(v);
}

const Json& array(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError("'" + what + "' must be an array");
  return j;
}

const Json& object(const Json& j, const std::string& what) {
  if (!j.is_object()) throw ParseError("'" + what + "' must be an object");
  return j;
}

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json params_json(const ScenarioParams& p) {
  Json j;
  j["n"] = p.n;
  j["region"] = {p.width, p.height};
  j["distance_unit"] = p.distance_unit;
  j["path_loss_exponent"] = p.path_loss_exponent;
  j["max_power"] = p.max_power;
  j["bandwidth"] = p.bandwidth;
  j["request_rate"] = p.request_rate;
  j["lambda_m"] = p.lambda_m;
  j["hop_bound"] = p.hop_bound;
  j["threshold"] = optional_number(p.threshold);
  j["seed"] = p.seed;
  if (p.positions) {
    Json pos = Json::array();
    for (Eigen::Index i = 0; i < p.positions->cols(); ++i) {
      pos.push_back({(*p.positions)(0, i), (*p.positions)(1, i)});
    }
    j["positions"] = pos;
  }
  if (p.requests) {
    Json reqs = Json::array();
    for (const ScriptedRequest& r : *p.requests) {
      reqs.push_back({{"source", r.source},
                      {"destination", r.destination},
                      {"demand", r.demand}});
    }
    j["requests"] = reqs;
  }
  return j;
}

std::string path_text(const Path& path) {
  std::string out;
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (k > 0) out += " → ";
    out += std::to_string(path[k]);
  }
  return out;
}

std::string short_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", value);
  return buf;
}

void check(bool ok, const std::string& what) {
  if (!ok) throw ParseError("inconsistent report: " + what);
}

}  // namespace

ScenarioParams parse_scenario(std::string_view text) {
  const Json j = parse_json(text);
  object(j, "scenario");
  for (const auto& [key, value] : j.items()) {
    if (!kScenarioKeys.count(key)) throw ParseError("unknown key '" + key + "'");
  }
  ScenarioParams p;
  p.n = small_integer(field(j, "n"), "n");
  const Json& region = array(field(j, "region"), "region");
  if (region.size() != 2) throw ParseError("'region' must be [width, height]");
  p.width = number(region[0], "region");
  p.height = number(region[1], "region");
  if (j.contains("distance_unit")) {
    p.distance_unit = number(j["distance_unit"], "distance_unit");
  }
  p.path_loss_exponent =
      number(field(j, "path_loss_exponent"), "path_loss_exponent");
  p.max_power = number(field(j, "max_power"), "max_power");
  p.bandwidth = number(field(j, "bandwidth"), "bandwidth");
  p.request_rate = number(field(j, "request_rate"), "request_rate");
  p.lambda_m = number(field(j, "lambda_m"), "lambda_m");
  p.hop_bound = small_integer(field(j, "hop_bound"), "hop_bound");
  const Json& threshold = field(j, "threshold");
  if (!threshold.is_null()) p.threshold = number(threshold, "threshold");
  const Json& seed = field(j, "seed");
  if (!seed.is_number_unsigned()) {
    throw ParseError("'seed' must be a non-negative integer");
  }
  p.seed = seed.get<std::uint64_t>();

  if (j.contains("positions")) {
    const Json& pos = array(j["positions"], "positions");
    Eigen::Matrix2Xd m(2, static_cast<Eigen::Index>(pos.size()));
    for (std::size_t i = 0; i < pos.size(); ++i) {
      const Json& xy = array(pos[i], "positions entry");
      if (xy.size() != 2) throw ParseError("positions entries must be [x, y]");
      m(0, static_cast<Eigen::Index>(i)) = number(xy[0], "positions entry");
      m(1, static_cast<Eigen::Index>(i)) = number(xy[1], "positions entry");
    }
    p.positions = std::move(m);
  }
  if (j.contains("requests")) {
    std::vector<ScriptedRequest> requests;
    for (const Json& r : array(j["requests"], "requests")) {
      object(r, "requests entry");
      for (const auto& [key, value] : r.items()) {
        if (key != "source" && key != "destination" && key != "demand") {
          throw ParseError("unknown request key '" + key + "'");
        }
      }
      requests.push_back(
          ScriptedRequest{small_integer(field(r, "source"), "source"),
                          small_integer(field(r, "destination"), "destination"),
                          number(field(r, "demand"), "demand")});
    }
    p.requests = std::move(requests);
  }
  validate_params(p);
  return p;
}

ScenarioParams load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

std::string scenario_to_json(const ScenarioParams& params) {
  return params_json(params).dump(2) + "\n";
}

std::string format_number(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

RouteStatus route_status_from_string(std::string_view text) {
  for (RouteStatus s : {RouteStatus::kRouted, RouteStatus::kLost,
                        RouteStatus::kLostResourceLimit}) {
    if (to_string(s) == text) return s;
  }
  throw ParseError("unknown route status '" + std::string(text) + "'");
}

std::string format_table(const ScenarioParams& params, const RunReport& report) {
  std::string out = "λ_m = " + format_number(params.lambda_m) +
                    ", Threshold = " +
                    (params.threshold ? format_number(*params.threshold)
                                      : std::string("none")) +
                    ", Hop count = " + std::to_string(params.hop_bound) +
                    ", Variance = " + short_number(report.variance) + "\n";
  out += "Req. # | λ_{s,d} | Sender | Receiver | Routing Path\n";
  for (const RequestRow& row : report.rows) {
    out += std::to_string(row.index) + " | " + format_number(row.demand) +
           " | " + std::to_string(row.source) + " | " +
           std::to_string(row.destination) + " | " +
           (row.path ? path_text(*row.path) : std::string("Lost")) + "\n";
  }
  return out;
}

std::string report_to_json(const ScenarioParams& params,
                           const RunReport& report) {
  Json j;
  j["scenario"] = params_json(params);
  Json rows = Json::array();
  for (const RequestRow& row : report.rows) {
    Json r;
    r["index"] = row.index;
    r["demand"] = row.demand;
    r["source"] = row.source;
    r["destination"] = row.destination;
    r["status"] = to_string(row.status);
    r["path"] = row.path ? Json(*row.path) : Json(nullptr);
    r["e_max"] = row.e_max;
    r["energy"] = row.energy;
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["lost_count"] = report.lost_count;
  j["variance"] = report.variance;
  j["total_energy"] = report.total_energy;
  const Eigen::VectorXd& e = report.final_ledger.consumed();
  j["final_ledger"] = std::vector<double>(e.data(), e.data() + e.size());
  j["diagnostics"] = report.diagnostics;
  return j.dump(2) + "\n";
}

RunReport report_from_json(std::string_view text) {
  const Json j = parse_json(text);
  object(j, "report");
  RunReport report;
  for (const Json& r : array(field(j, "rows"), "rows")) {
    object(r, "row");
    RequestRow row;
    row.index = small_integer(field(r, "index"), "index");
    row.demand = number(field(r, "demand"), "demand");
    row.source = small_integer(field(r, "source"), "source");
    row.destination = small_integer(field(r, "destination"), "destination");
    const Json& status = field(r, "status");
    if (!status.is_string()) throw ParseError("'status' must be a string");
    row.status = route_status_from_string(status.get<std::string>());
    const Json& path = field(r, "path");
    if (!path.is_null()) {
      Path p;
      for (const Json& v : array(path, "path")) p.push_back(small_integer(v, "path"));
      row.path = std::move(p);
    }
    row.e_max = number(field(r, "e_max"), "e_max");
    row.energy = number(field(r, "energy"), "energy");
    report.rows.push_back(std::move(row));
  }
  report.lost_count = small_integer(field(j, "lost_count"), "lost_count");
  report.variance = number(field(j, "variance"), "variance");
  report.total_energy = number(field(j, "total_energy"), "total_energy");
  const Json& ledger = array(field(j, "final_ledger"), "final_ledger");
  Eigen::VectorXd consumed(static_cast<Eigen::Index>(ledger.size()));
  for (std::size_t i = 0; i < ledger.size(); ++i) {
    consumed[static_cast<Eigen::Index>(i)] = number(ledger[i], "final_ledger");
  }
  check(consumed.size() >= 2, "ledger needs at least two nodes");
  try {
    report.final_ledger = EnergyLedger(consumed);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  for (const Json& d : array(field(j, "diagnostics"), "diagnostics")) {
    if (!d.is_string()) throw ParseError("diagnostics must be strings");
    report.diagnostics.push_back(d.get<std::string>());
  }

  const int n = report.final_ledger.size();
  int lost = 0;
  for (std::size_t k = 0; k < report.rows.size(); ++k) {
    const RequestRow& row = report.rows[k];
    check(row.index == static_cast<int>(k) + 1, "row indices");
    check(row.source >= 0 && row.source < n && row.destination >= 0 &&
              row.destination < n && row.source != row.destination,
          "row endpoints");
    check(row.demand > 0.0, "row demand");
    check((row.status == RouteStatus::kRouted) == row.path.has_value(),
          "row status and path");
    if (row.path) {
      check(row.path->size() >= 2 && row.path->front() == row.source &&
                row.path->back() == row.destination,
            "row path endpoints");
      for (NodeId v : *row.path) check(v >= 0 && v < n, "path node");
    } else {
      ++lost;
      check(row.energy == 0.0 && row.e_max == 0.0, "lost row energy");
    }
  }
  check(report.lost_count == lost, "lost_count");
  check(report.total_energy == report.final_ledger.total(), "total_energy");
  check(report.variance == variance_of(report.final_ledger), "variance");
  return report;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::string out(kSweepCsvHeader);
  out += "\n";
  for (std::size_t k = 0; k < result.points.size(); ++k) {
    const SweepPoint& p = result.points[k];
    out += (result.values[k] ? format_number(*result.values[k])
                             : std::string("none")) +
           "," + format_number(p.variance_mean) + "," +
           format_number(p.lost_mean) + "," +
           format_number(p.total_energy_mean) + "," +
           std::to_string(result.replications) + "\n";
  }
  return out;
}

std::vector<std::optional<double>> parse_axis_values(std::string_view text) {
  std::vector<std::optional<double>> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view token = text.substr(start, end - start);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (token == "none") {
      out.emplace_back(std::nullopt);
    } else {
      double v = 0.0;
      const auto r = std::from_chars(token.data(), token.data() + token.size(), v);
      if (token.empty() || r.ec != std::errc() ||
          r.ptr != token.data() + token.size() || !std::isfinite(v)) {
        throw ParseError("bad axis value '" + std::string(token) + "'");
      }
      out.emplace_back(v);
    }
    start = end + 1;
  }
  return out;
}

}  // namespace wsnqos
