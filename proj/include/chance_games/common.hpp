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

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace chance_games {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

// One control vector per player, in player order.
using ControlSet = std::vector<VectorXd>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad dimensions, non-finite values, malformed configuration.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public InvalidInputError {
 public:
  ValidationError(std::string field, const std::string& message)
      : InvalidInputError(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class DegenerateGradientError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// The stacked stationarity system of an LQ game is (numerically) singular.
class EquilibriumDegeneracyError : public NumericalError {
 public:
  EquilibriumDegeneracyError(int timestep, double min_singular_value);
  int timestep() const { return timestep_; }
  double min_singular_value() const { return min_singular_value_; }

 private:
  int timestep_;
  double min_singular_value_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t byte_offset, const std::string& message);
  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

void require_finite(const Eigen::Ref<const MatrixXd>& values, const char* what);
void require_size(Eigen::Index actual, Eigen::Index expected, const char* what);

inline MatrixXd symmetrized(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

// Smallest eigenvalue of the symmetric part of `m`.
double min_symmetric_eigenvalue(const MatrixXd& m);

// Flattens a control set into one stacked vector.
VectorXd stack_controls(const ControlSet& controls);

}  // namespace chance_games
