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

#include "chance_games/common.hpp"

#include <Eigen/Eigenvalues>

#include <sstream>

namespace chance_games {

EquilibriumDegeneracyError::EquilibriumDegeneracyError(int timestep,
                                                       double min_singular_value)
    : NumericalError([&] {
        std::ostringstream os;
        os << "LQ game stationarity system is singular at timestep " << timestep
           << " (min singular value " << min_singular_value << ")";
        return os.str();
      }()),
      timestep_(timestep),
      min_singular_value_(min_singular_value) {}

ParseError::ParseError(std::size_t byte_offset, const std::string& message)
    : Error("parse error at byte " + std::to_string(byte_offset) + ": " + message),
      byte_offset_(byte_offset) {}

void require_finite(const Eigen::Ref<const MatrixXd>& values, const char* what) {
  if (!values.allFinite()) {
    throw InvalidInputError(std::string(what) + " contains non-finite entries");
  }
}

void require_size(Eigen::Index actual, Eigen::Index expected, const char* what) {
  if (actual != expected) {
    std::ostringstream os;
    os << what << ": expected dimension " << expected << ", got " << actual;
    throw InvalidInputError(os.str());
  }
}

double min_symmetric_eigenvalue(const MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrized(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

VectorXd stack_controls(const ControlSet& controls) {
  Eigen::Index total = 0;
  for (const auto& u : controls) total += u.size();
  VectorXd out(total);
  Eigen::Index offset = 0;
  for (const auto& u : controls) {
    out.segment(offset, u.size()) = u;
    offset += u.size();
  }
  return out;
}

}  // namespace chance_games
