// Copyright 2026 The rotest Authors
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

#ifndef ROTEST_ERRORS_HPP
#define ROTEST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rotest {

/// Base class for all rotest errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- distributions ---
class InvalidDistribution : public Error {
 public:
  using Error::Error;
};
class ZeroMassAboveThreshold : public Error {
 public:
  using Error::Error;
};
class IncompatibleSupports : public Error {
 public:
  using Error::Error;
};
class DegenerateTilt : public Error {
 public:
  using Error::Error;
};
class MissingRiskScores : public Error {
 public:
  using Error::Error;
};

// --- policies ---
class InvalidPolicy : public Error {
 public:
  using Error::Error;
};

// --- estimation ---
class EmptyGroup : public Error {
 public:
  using Error::Error;
};
class UnavailableSE : public Error {
 public:
  using Error::Error;
};
class ZeroSE : public Error {
 public:
  using Error::Error;
};

// --- simulation ---
class ZeroDecisionMass : public Error {
 public:
  using Error::Error;
};

// --- oracle ---
class InvalidInstance : public Error {
 public:
  using Error::Error;
};
class NotFound : public Error {
 public:
  using Error::Error;
};

// --- io ---
class SchemaError : public Error {
 public:
  using Error::Error;
};
class ValueError : public Error {
 public:
  using Error::Error;
};
class EmptyAfterFilter : public Error {
 public:
  using Error::Error;
};
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rotest

#endif  // ROTEST_ERRORS_HPP
