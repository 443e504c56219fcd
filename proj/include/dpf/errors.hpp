// Copyright 2026 The dpf Authors
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

#ifndef DPF_ERRORS_HPP
#define DPF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dpf {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (maps, records, config syntax).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Input that parses but violates an invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of an operation (blocked cell, mismatched maps, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A measurement or replay time that falls outside the retained history window.
class StaleMeasurementError : public Error {
 public:
  using Error::Error;
};

/// Timestep query outside the belief window.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Detection reported outside the measurement footprint.
class MalformedMeasurementError : public Error {
 public:
  using Error::Error;
};

/// Exact inference requested beyond the configured dense budget.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Evidence with zero probability under the exact model.
class DegenerateEvidenceError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dpf

#endif
