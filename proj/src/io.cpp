/*
 * Copyright 2026 The chance_games Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "chance_games/io.hpp"

#include "json_util.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace chance_games {

using detail::Json;

std::string format_double(double value) {
  if (!std::isfinite(value)) throw InvalidInputError("cannot format a non-finite value");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

TrajectoryDocument make_trajectory_document(const std::string& scenario, const GameSpec& spec,
                                            const BeliefTrajectory& trajectory) {
  TrajectoryDocument doc;
  doc.scenario = scenario;
  doc.num_agents = spec.num_players();
  doc.dt = spec.dt();
  doc.means = trajectory.means;
  doc.controls = trajectory.controls;
  doc.covariances = trajectory.covariances;
  return doc;
}

namespace {

Json labels_json(const std::vector<std::string>& labels) {
  Json out = Json::array();
  for (const auto& l : labels) out.push_back(l);
  return out;
}

void check_document(const TrajectoryDocument& doc) {
  if (doc.num_agents < 0) throw ValidationError("num_agents", "must be >= 0");
  const Eigen::Index n = kAgentStateDim * doc.num_agents;
  if (!doc.means.empty() && doc.means.size() != doc.controls.size() + 1) {
    throw ValidationError("controls", "expected one control set per transition");
  }
  if (doc.means.empty() && !doc.controls.empty()) {
    throw ValidationError("controls", "controls without states");
  }
  for (const auto& m : doc.means) require_size(m.size(), n, "trajectory mean");
  for (const auto& u : doc.controls) {
    require_size(static_cast<Eigen::Index>(u.size()), doc.num_agents, "trajectory controls");
    for (const auto& ui : u) require_size(ui.size(), kAgentControlDim, "trajectory control");
  }
  if (!doc.covariances.empty() && doc.covariances.size() != doc.means.size()) {
    throw ValidationError("covariances", "expected one covariance per timestep");
  }
}

}  // namespace

std::string trajectory_to_json(const TrajectoryDocument& doc) {
  check_document(doc);
  Json root = Json::object();
  root["schema_version"] = kTrajectorySchemaVersion;
  root["scenario"] = doc.scenario;
  root["num_agents"] = doc.num_agents;
  root["dt"] = doc.dt ? Json(*doc.dt) : Json(nullptr);
  root["horizon"] = doc.horizon();
  root["state_labels"] = labels_json(agent_state_labels());
  root["control_labels"] = labels_json(agent_control_labels());
  Json steps = Json::array();
  for (std::size_t k = 0; k < doc.means.size(); ++k) {
    Json step = Json::object();
    step["k"] = k;
    step["mean"] = detail::to_json(doc.means[k]);
    if (k < doc.controls.size()) {
      Json u = Json::array();
      for (const auto& ui : doc.controls[k]) u.push_back(detail::to_json(ui));
      step["controls"] = std::move(u);
    } else {
      step["controls"] = nullptr;
    }
    step["covariance"] = doc.covariances.empty() ? Json(nullptr)
                                                 : detail::pack_lower(doc.covariances[k]);
    steps.push_back(std::move(step));
  }
  root["steps"] = std::move(steps);
  return detail::dump_compact(root, 1);
}

TrajectoryDocument trajectory_from_json(std::string_view text) {
  const Json root = detail::parse_json(text);
  detail::reject_unknown_fields(root, "",
                                {"schema_version", "scenario", "num_agents", "dt", "horizon",
                                 "state_labels", "control_labels", "steps"});
  const int version =
      detail::as_int(detail::require_field(root, "", "schema_version"), "schema_version");
  if (version != kTrajectorySchemaVersion) {
    throw ValidationError("schema_version", "unsupported version " + std::to_string(version));
  }
  TrajectoryDocument doc;
  if (const Json* v = detail::optional_field(root, "scenario")) {
    doc.scenario = detail::as_string(*v, "scenario");
  }
  doc.num_agents = detail::as_int(detail::require_field(root, "", "num_agents"), "num_agents");
  if (doc.num_agents < 0) throw ValidationError("num_agents", "must be >= 0");
  if (const Json* v = detail::optional_field(root, "dt"); v && !v->is_null()) {
    doc.dt = detail::as_number(*v, "dt");
  }
  const Eigen::Index n = kAgentStateDim * doc.num_agents;
  const Json& steps = detail::require_field(root, "", "steps");
  if (!steps.is_array()) throw ValidationError("steps", "expected an array");
  bool has_cov = false;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const std::string path = "steps[" + std::to_string(k) + "]";
    const Json& step = steps[k];
    detail::reject_unknown_fields(step, path, {"k", "mean", "controls", "covariance"});
    if (detail::as_int(detail::require_field(step, path, "k"), path + ".k") !=
        static_cast<int>(k)) {
      throw ValidationError(path + ".k", "steps must be consecutive from 0");
    }
    doc.means.push_back(
        detail::as_vector(detail::require_field(step, path, "mean"), path + ".mean", n));
    const Json& u = detail::require_field(step, path, "controls");
    const bool last = k + 1 == steps.size();
    if (last) {
      if (!u.is_null()) throw ValidationError(path + ".controls", "must be null on the final step");
    } else {
      if (!u.is_array() || static_cast<int>(u.size()) != doc.num_agents) {
        throw ValidationError(path + ".controls", "expected one control per agent");
      }
      ControlSet set;
      for (std::size_t i = 0; i < u.size(); ++i) {
        set.push_back(detail::as_vector(u[i], path + ".controls[" + std::to_string(i) + "]",
                                        kAgentControlDim));
      }
      doc.controls.push_back(std::move(set));
    }
    const Json& cov = detail::require_field(step, path, "covariance");
    if (k == 0) has_cov = !cov.is_null();
    if (has_cov != !cov.is_null()) {
      throw ValidationError(path + ".covariance", "covariances must be given for all steps or none");
    }
    if (has_cov) doc.covariances.push_back(detail::unpack_lower(cov, path + ".covariance", n));
  }
  if (const Json* v = detail::optional_field(root, "horizon")) {
    if (detail::as_int(*v, "horizon") != doc.horizon()) {
      throw ValidationError("horizon", "does not match the number of steps");
    }
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Tabular form

namespace {

std::string csv_header() {
  std::string h = "k,agent";
  for (const auto& l : agent_state_labels()) h += "," + l;
  for (const auto& l : agent_control_labels()) h += "," + l;
  return h;
}

}  // namespace

std::string trajectory_to_csv(const TrajectoryDocument& doc) {
  check_document(doc);
  std::string out = csv_header() + "\n";
  for (std::size_t k = 0; k < doc.means.size(); ++k) {
    for (int i = 0; i < doc.num_agents; ++i) {
      out += std::to_string(k) + "," + std::to_string(i);
      for (int s = 0; s < kAgentStateDim; ++s) {
        out += "," + format_double(doc.means[k](kAgentStateDim * i + s));
      }
      for (int c = 0; c < kAgentControlDim; ++c) {
        out += ",";
        if (k < doc.controls.size()) out += format_double(doc.controls[k][i](c));
      }
      out += "\n";
    }
  }
  return out;
}

namespace {

struct CsvCell {
  std::string_view text;
  std::size_t offset;
};

double parse_cell_double(const CsvCell& cell) {
  double value = 0.0;
  const auto* first = cell.text.data();
  const auto* last = first + cell.text.size();
  const auto res = std::from_chars(first, last, value);
  if (cell.text.empty() || res.ec != std::errc() || res.ptr != last || !std::isfinite(value)) {
    throw ParseError(cell.offset, "expected a number, got '" + std::string(cell.text) + "'");
  }
  return value;
}

int parse_cell_int(const CsvCell& cell) {
  int value = 0;
  const auto* first = cell.text.data();
  const auto* last = first + cell.text.size();
  const auto res = std::from_chars(first, last, value);
  if (cell.text.empty() || res.ec != std::errc() || res.ptr != last || value < 0) {
    throw ParseError(cell.offset, "expected a non-negative integer, got '" +
                                      std::string(cell.text) + "'");
  }
  return value;
}

}  // namespace

TrajectoryDocument trajectory_from_csv(std::string_view text) {
  const std::string header = csv_header();
  const std::size_t columns = 2 + kAgentStateDim + kAgentControlDim;

  // Split into lines, remembering byte offsets.
  std::vector<std::pair<std::string_view, std::size_t>> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      throw ParseError(text.size(), "truncated input: last line has no newline");
    }
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line, pos);
    pos = end + 1;
  }
  if (lines.empty()) throw ParseError(0, "empty input: missing header");
  if (lines[0].first != header) throw ParseError(0, "unexpected header, expected '" + header + "'");

  struct Row {
    int k;
    int agent;
    std::vector<CsvCell> cells;
    std::size_t offset;
  };
  std::vector<Row> rows;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto [line, offset] = lines[li];
    std::vector<CsvCell> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::size_t stop = comma == std::string_view::npos ? line.size() : comma;
      cells.push_back({line.substr(start, stop - start), offset + start});
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cells.size() != columns) {
      throw ParseError(offset, "expected " + std::to_string(columns) + " columns, got " +
                                   std::to_string(cells.size()));
    }
    rows.push_back({parse_cell_int(cells[0]), parse_cell_int(cells[1]), std::move(cells), offset});
  }

  TrajectoryDocument doc;
  if (rows.empty()) return doc;
  int num_agents = 0;
  while (num_agents < static_cast<int>(rows.size()) && rows[num_agents].k == 0) ++num_agents;
  if (num_agents == 0) throw ParseError(rows[0].cells[0].offset, "first row must be timestep 0");
  if (rows.size() % num_agents != 0) {
    throw ParseError(text.size(), "row count is not a multiple of the agent count");
  }
  doc.num_agents = num_agents;
  const int steps = static_cast<int>(rows.size()) / num_agents;
  for (int k = 0; k < steps; ++k) {
    VectorXd mean(kAgentStateDim * num_agents);
    ControlSet controls;
    const bool last = k + 1 == steps;
    for (int i = 0; i < num_agents; ++i) {
      const Row& row = rows[k * num_agents + i];
      if (row.k != k) throw ParseError(row.cells[0].offset, "expected timestep " + std::to_string(k));
      if (row.agent != i) throw ParseError(row.cells[1].offset, "expected agent " + std::to_string(i));
      for (int s = 0; s < kAgentStateDim; ++s) {
        mean(kAgentStateDim * i + s) = parse_cell_double(row.cells[2 + s]);
      }
      Eigen::Vector2d u;
      for (int c = 0; c < kAgentControlDim; ++c) {
        const CsvCell& cell = row.cells[2 + kAgentStateDim + c];
        if (last) {
          if (!cell.text.empty()) throw ParseError(cell.offset, "controls must be empty on the final step");
        } else {
          u(c) = parse_cell_double(cell);
        }
      }
      if (!last) controls.push_back(u);
    }
    doc.means.push_back(std::move(mean));
    if (!last) doc.controls.push_back(std::move(controls));
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Diagnostics, reports, manifests

std::string diagnostics_to_json(const Solution& solution) {
  const ConvergenceReport r = convergence_report(solution);
  Json root = Json::object();
  root["mode"] = r.mode;
  root["converged"] = r.converged;
  root["final_violation"] = r.final_violation;
  root["regularized_filter_updates"] = solution.diagnostics.regularized_filter_updates;
  Json outer = Json::array();
  for (const auto& rec : solution.diagnostics.outer) {
    Json j = Json::object();
    j["iteration"] = rec.iteration;
    j["max_surrogate_violation"] = rec.max_surrogate_violation;
    j["max_probability_violation"] = rec.max_probability_violation;
    j["player_costs"] = rec.player_costs;
    j["inner_iterations"] = rec.inner_iterations;
    j["inner_converged"] = rec.inner_converged;
    j["line_search_failed"] = rec.line_search_failed;
    if (solution.multipliers) {
      j["max_lambda"] = rec.max_lambda;
      j["max_mu"] = rec.max_mu;
    }
    Json inner = Json::array();
    for (const auto& it : rec.inner) {
      Json i = Json::object();
      i["merit"] = it.merit;
      i["step_size"] = it.step_size;
      i["max_mean_change"] = it.max_mean_change;
      i["line_search_trials"] = it.line_search_trials;
      inner.push_back(std::move(i));
    }
    j["inner"] = std::move(inner);
    outer.push_back(std::move(j));
  }
  root["outer"] = std::move(outer);
  if (solution.multipliers) {
    const auto& m = *solution.multipliers;
    Json mult = Json::array();
    for (std::size_t s = 0; s < m.size(); ++s) {
      mult.push_back(Json::object({{"timestep", m.slots[s].timestep},
                                   {"constraint", m.slots[s].index},
                                   {"lambda", m.lambda[s]},
                                   {"mu", m.mu[s]}}));
    }
    root["multipliers"] = std::move(mult);
  }
  return detail::dump_compact(root, 1);
}

std::string report_to_json(const MonteCarloReport& report) {
  Json root = Json::object();
  root["trials"] = report.trials;
  root["satisfied"] = report.satisfied_count;
  root["satisfaction_rate"] = report.satisfaction_rate;
  root["histogram"] = Json::object({{"edges", report.violation_histogram.edges},
                                    {"counts", report.violation_histogram.counts}});
  root["cost_mean"] = report.cost_mean;
  root["cost_stddev"] = report.cost_stddev;
  Json trials = Json::array();
  for (std::size_t t = 0; t < report.seeds.size(); ++t) {
    trials.push_back(Json::object({{"seed", report.seeds[t]},
                                   {"max_violation", report.max_violations[t]},
                                   {"satisfied", static_cast<bool>(report.satisfied[t])}}));
  }
  root["per_trial"] = std::move(trials);
  return detail::dump_compact(root, 1);
}

std::string manifest_to_json(const RunManifest& m) {
  Json root = Json::object();
  root["command"] = m.command;
  root["scenario"] = m.scenario;
  root["overrides"] = m.overrides;
  root["mode"] = m.mode;
  root["seeds"] = m.seeds;
  root["version"] = m.version;
  root["wall_time_seconds"] = m.wall_time_seconds;
  root["outputs"] = m.outputs;
  return detail::dump_compact(root);
}

}  // namespace chance_games
