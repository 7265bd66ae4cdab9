// Copyright 2026 The ncirl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace ncirl {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The simplex hit its iteration cap or produced non-finite numbers.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// A backup LP came back infeasible or unbounded; the value set is malformed.
class InfeasibleBackup : public Error {
 public:
  using Error::Error;
};

/// Bayes update conditioned on an action with zero probability under the belief.
class ZeroProbabilityObservation : public Error {
 public:
  using Error::Error;
};

/// An agent was driven out of its step/observe protocol.
class StaleAgentState : public Error {
 public:
  using Error::Error;
};

class GenerationFailure : public Error {
 public:
  using Error::Error;
};

class StateExplosion : public Error {
 public:
  using Error::Error;
};

class EmptyCandidatePool : public Error {
 public:
  using Error::Error;
};

/// Malformed input document or configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ncirl
