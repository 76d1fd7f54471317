// Copyright 2026 The Getup Authors
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

#ifndef GETUP_ERROR_H_
#define GETUP_ERROR_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace getup {

// Base of every error this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent configuration. `path` names the offending field.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message, std::string path = "")
      : Error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// A caller violated an operation precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

// The simulator produced non-finite state.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& message, int64_t step)
      : Error(message + " (step " + std::to_string(step) + ")"), step_(step) {}
  int64_t step() const { return step_; }

 private:
  int64_t step_;
};

// Non-finite loss or network output during learning.
class TrainingDivergedError : public Error {
 public:
  using Error::Error;
};

// The weak policy failed to produce a get-up reference within its frame cap.
class ReferenceFailedError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed line-delimited input; `line` is 1-based.
class ParseError : public IoError {
 public:
  ParseError(const std::string& message, int64_t line)
      : IoError("line " + std::to_string(line) + ": " + message), line_(line) {}
  int64_t line() const { return line_; }

 private:
  int64_t line_;
};

// Checkpoint payload does not match its manifest.
class IntegrityError : public IoError {
 public:
  using IoError::IoError;
};

// Stored schema version differs from the one this build reads.
class SchemaVersionError : public IoError {
 public:
  SchemaVersionError(int found, int expected)
      : IoError("schema version " + std::to_string(found) +
                " requires migration to " + std::to_string(expected)),
        found_(found),
        expected_(expected) {}
  int found() const { return found_; }
  int expected() const { return expected_; }

 private:
  int found_;
  int expected_;
};

}  // namespace getup

#endif  // GETUP_ERROR_H_
