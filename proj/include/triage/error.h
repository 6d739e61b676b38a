// Copyright 2026 The Triage Authors.
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

#ifndef TRIAGE_ERROR_H_
#define TRIAGE_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace triage {

// Base class for every error raised by the library. Callers that only care
// about "did it work" can catch this; the subclasses let the gateway and CLI
// map failures onto status codes and exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raw transcript text could not be decoded.
class IngestionError : public Error {
 public:
  IngestionError(const std::string &what, std::size_t byte_offset)
      : Error(what + " at byte offset " + std::to_string(byte_offset)),
        byte_offset_(byte_offset) {}
  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class SchemaVersionError : public Error {
 public:
  SchemaVersionError(int found, int expected)
      : Error("schema version " + std::to_string(found) +
              " is not supported (expected " + std::to_string(expected) + ")"),
        found_(found) {}
  int found() const { return found_; }

 private:
  int found_;
};

// Malformed input to an operation: bad field values, mismatched ids.
class InputError : public Error {
 public:
  using Error::Error;
};

// A request violated a required-field or state rule.
class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A remote scorer or resolver answered with a structurally valid body whose
// values break the protocol (e.g. a score outside [0,1]).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// A remote call failed and may be retried. `ids` names the windows or
// sentences whose results are missing.
class TransportError : public Error {
 public:
  TransportError(const std::string &what, std::vector<std::string> ids)
      : Error(what), ids_(std::move(ids)) {}
  const std::vector<std::string> &ids() const { return ids_; }
  bool retryable() const { return true; }

 private:
  std::vector<std::string> ids_;
};

class IncompleteInputError : public Error {
 public:
  using Error::Error;
};

// A second decision on an already-decided item.
class ConflictError : public Error {
 public:
  ConflictError(const std::string &what, std::string winning_record_id)
      : Error(what), winning_record_id_(std::move(winning_record_id)) {}
  const std::string &winning_record_id() const { return winning_record_id_; }

 private:
  std::string winning_record_id_;
};

// Persisted state on disk is unreadable; the service refuses to start.
class StateCorruptError : public Error {
 public:
  using Error::Error;
};

}  // namespace triage

#endif  // TRIAGE_ERROR_H_
