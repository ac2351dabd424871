// Copyright 2026 The qvdp Authors
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

namespace qvdp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters, dimensions or scenario configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// The Liouvillian null space is not one-dimensional.
class DegenerateSteadyState : public Error {
 public:
  using Error::Error;
};

/// Net gain without a saturating loss channel: no normalizable stationary state.
class DivergentDynamics : public Error {
 public:
  using Error::Error;
};

/// Adaptive integration could not resolve the dynamics.
class StiffnessError : public Error {
 public:
  using Error::Error;
};

/// A closed form was requested outside the parameter range it was derived for.
class NotApplicable : public Error {
 public:
  using Error::Error;
};

/// Requested limit-cycle distortion exceeds what any drive strength can reach.
class UnattainableDistortion : public Error {
 public:
  using Error::Error;
};

/// The Fock cutoff needed for convergence exceeds the configured cap.
class DimCapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace qvdp
