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

#include "json_util.hpp"

#include <algorithm>

namespace chance_games::detail {

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.byte, e.what());
  }
}

void reject_unknown_fields(const Json& object, const std::string& path,
                           std::initializer_list<std::string_view> allowed) {
  if (!object.is_object()) throw ValidationError(path, "expected an object");
  for (const auto& [key, value] : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError(path.empty() ? key : path + "." + key, "unknown field");
    }
  }
}

const Json& require_field(const Json& object, const std::string& path, const char* key) {
  const auto it = object.find(key);
  if (it == object.end()) {
    throw ValidationError(path.empty() ? key : path + "." + key, "missing required field");
  }
  return *it;
}

const Json* optional_field(const Json& object, const char* key) {
  const auto it = object.find(key);
  return it == object.end() ? nullptr : &*it;
}

double as_number(const Json& value, const std::string& path) {
  if (!value.is_number()) throw ValidationError(path, "expected a number");
  return value.get<double>();
}

int as_int(const Json& value, const std::string& path) {
  if (!value.is_number_integer()) throw ValidationError(path, "expected an integer");
  return value.get<int>();
}

std::string as_string(const Json& value, const std::string& path) {
  if (!value.is_string()) throw ValidationError(path, "expected a string");
  return value.get<std::string>();
}

bool as_bool(const Json& value, const std::string& path) {
  if (!value.is_boolean()) throw ValidationError(path, "expected a boolean");
  return value.get<bool>();
}

VectorXd as_vector(const Json& value, const std::string& path, Eigen::Index expected) {
  if (!value.is_array()) throw ValidationError(path, "expected an array of numbers");
  if (expected >= 0 && static_cast<Eigen::Index>(value.size()) != expected) {
    throw ValidationError(path, "expected " + std::to_string(expected) + " entries, got " +
                                    std::to_string(value.size()));
  }
  VectorXd v(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    v(i) = as_number(value[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

MatrixXd as_matrix(const Json& value, const std::string& path) {
  if (!value.is_array()) throw ValidationError(path, "expected an array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(value.size());
  if (rows == 0) return MatrixXd(0, 0);
  const Eigen::Index cols = static_cast<Eigen::Index>(value[0].is_array() ? value[0].size() : 0);
  MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    m.row(r) = as_vector(value[r], path + "[" + std::to_string(r) + "]", cols).transpose();
  }
  return m;
}

Json to_json(const VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(VectorXd(m.row(r).transpose())));
  return out;
}

MatrixXd parse_covariance(const Json& value, const std::string& path, Eigen::Index dim) {
  MatrixXd m;
  if (value.is_number()) {
    m = as_number(value, path) * MatrixXd::Identity(dim, dim);
  } else if (value.is_object()) {
    reject_unknown_fields(value, path, {"diagonal"});
    m = as_vector(require_field(value, path, "diagonal"), path + ".diagonal", dim).asDiagonal();
  } else {
    m = as_matrix(value, path);
    if (m.rows() != dim || m.cols() != dim) {
      throw ValidationError(path, "expected a " + std::to_string(dim) + "x" +
                                      std::to_string(dim) + " matrix");
    }
  }
  return m;
}

Json covariance_to_json(const MatrixXd& m) {
  const bool diagonal = m.isDiagonal(0.0);
  if (diagonal) {
    const VectorXd d = m.diagonal();
    if (d.size() > 0 && (d.array() == d(0)).all()) return d(0);
    Json out = Json::object();
    out["diagonal"] = to_json(d);
    return out;
  }
  return to_json(m);
}

namespace {

bool is_flat_array(const Json& value) {
  if (!value.is_array()) return false;
  for (const auto& v : value) {
    if (v.is_array() || v.is_object()) return false;
  }
  return true;
}

void dump_into(const Json& value, int indent, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  if (value.is_object() && !value.empty()) {
    out += "{\n";
    std::size_t i = 0;
    for (const auto& [key, v] : value.items()) {
      out += pad + Json(key).dump() + ": ";
      dump_into(v, indent, depth + 1, out);
      out += ++i < value.size() ? ",\n" : "\n";
    }
    out += close_pad + "}";
  } else if (value.is_array() && !value.empty() && !is_flat_array(value)) {
    out += "[\n";
    for (std::size_t i = 0; i < value.size(); ++i) {
      out += pad;
      dump_into(value[i], indent, depth + 1, out);
      out += i + 1 < value.size() ? ",\n" : "\n";
    }
    out += close_pad + "]";
  } else if (value.is_array()) {
    out += "[";
    for (std::size_t i = 0; i < value.size(); ++i) {
      if (i > 0) out += ", ";
      out += value[i].dump();
    }
    out += "]";
  } else {
    out += value.dump();
  }
}

}  // namespace

std::string dump_compact(const Json& value, int indent) {
  std::string out;
  dump_into(value, indent, 0, out);
  return out + "\n";
}

Json pack_lower(const MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c <= r; ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

MatrixXd unpack_lower(const Json& value, const std::string& path, Eigen::Index dim) {
  if (!value.is_array() || static_cast<Eigen::Index>(value.size()) != dim) {
    throw ValidationError(path, "expected " + std::to_string(dim) + " packed rows");
  }
  MatrixXd m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    const VectorXd row = as_vector(value[r], path + "[" + std::to_string(r) + "]", r + 1);
    for (Eigen::Index c = 0; c <= r; ++c) {
      m(r, c) = row(c);
      m(c, r) = row(c);
    }
  }
  return m;
}

}  // namespace chance_games::detail
