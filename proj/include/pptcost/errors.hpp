// Copyright 2026 The pptcost Authors
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

#include <stdexcept>
#include <string>

namespace pptcost {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a documented precondition (bad state, bad POVM, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class ShapeMismatch : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class DimensionCap : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// The conic backend did not return a usable optimum.
class SolverFailed : public Error {
 public:
  using Error::Error;
};

/// A feasibility search found no point inside the allowed bracket.
class Infeasible : public Error {
 public:
  using Error::Error;
};

/// The entanglement-cost hierarchy never reached the zero threshold.
class NotConverged : public Error {
 public:
  NotConverged(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace pptcost
