// Copyright 2026 The aveas-toolkit Authors
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

#ifndef AVEAS_ERRORS_HPP_
#define AVEAS_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace aveas {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed JSON text. The message carries line/column from the parser.
class SyntaxError : public Error {
 public:
  using Error::Error;
};

// Well-formed JSON that does not match the scenario profile. The message
// names the offending JSON path.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Structurally valid document with inconsistent content (dangling
// references, non-monotonic timestamps, ...).
class SemanticError : public Error {
 public:
  using Error::Error;
};

// An in-memory scenario failed validation on serialization or annotation.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Filesystem problem: missing file, unreadable directory, failed rename.
class IoError : public Error {
 public:
  using Error::Error;
};

// Store lookup for an unknown scenario id.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

// Ingest of a scenario whose id is already present in the store.
class DuplicateIdError : public Error {
 public:
  using Error::Error;
};

// Stored bytes do not hash to the recorded content hash.
class CorruptEntryError : public Error {
 public:
  using Error::Error;
};

// Ingest rejected a document; the message embeds the validation report.
class ValidationFailedError : public Error {
 public:
  using Error::Error;
};

// Invalid simulation, calibration or sampling configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Calibration received or produced an empty observable sample.
class EmptySampleError : public Error {
 public:
  using Error::Error;
};

// Sampler asked for an event id the base scenario does not contain.
class NoSuchEventError : public Error {
 public:
  using Error::Error;
};

// Sampler needs frame states that the base scenario lacks.
class MissingStatesError : public Error {
 public:
  using Error::Error;
};

}  // namespace aveas

#endif  // AVEAS_ERRORS_HPP_
