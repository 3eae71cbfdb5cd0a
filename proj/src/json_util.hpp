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

#pragma once

#include "chance_games/common.hpp"

#include <json.hpp>

#include <initializer_list>
#include <string>
#include <string_view>

namespace chance_games::detail {

using Json = nlohmann::ordered_json;

// Parses `text`, mapping syntax errors to ParseError with the byte offset.
Json parse_json(std::string_view text);

void reject_unknown_fields(const Json& object, const std::string& path,
                           std::initializer_list<std::string_view> allowed);

const Json& require_field(const Json& object, const std::string& path, const char* key);
const Json* optional_field(const Json& object, const char* key);

double as_number(const Json& value, const std::string& path);
int as_int(const Json& value, const std::string& path);
std::string as_string(const Json& value, const std::string& path);
bool as_bool(const Json& value, const std::string& path);
VectorXd as_vector(const Json& value, const std::string& path, Eigen::Index expected = -1);
MatrixXd as_matrix(const Json& value, const std::string& path);

Json to_json(const VectorXd& v);
Json to_json(const MatrixXd& m);

// Scalar (multiple of I), {"diagonal": [...]} or a full matrix.
MatrixXd parse_covariance(const Json& value, const std::string& path, Eigen::Index dim);
Json covariance_to_json(const MatrixXd& m);

// Indented output with arrays of scalars kept on one line.
std::string dump_compact(const Json& value, int indent = 2);

// Lower triangle, row by row.
Json pack_lower(const MatrixXd& m);
MatrixXd unpack_lower(const Json& value, const std::string& path, Eigen::Index dim);

}  // namespace chance_games::detail
