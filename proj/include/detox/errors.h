// Copyright 2026 The Detox Authors.
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

#ifndef DETOX_ERRORS_H_
#define DETOX_ERRORS_H_

#include <stdexcept>
#include <string>

namespace detox {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, size_t line = 0)
      : Error(line == 0 ? message
                        : "line " + std::to_string(line) + ": " + message),
        line_(line) {}
  // Prefixes the message with `context`, usually a file name.
  ParseError(const std::string& context, const ParseError& inner)
      : Error(context + ": " + inner.what()), line_(inner.line()) {}

  size_t line() const { return line_; }

 private:
  size_t line_;
};

class DuplicateKeyError : public Error {
 public:
  using Error::Error;
};

class EmptyCorpusError : public Error {
 public:
  using Error::Error;
};

// Model file written by an unknown schema version.
class FormatVersionError : public Error {
 public:
  using Error::Error;
};

// Model file internally inconsistent (e.g. weights vs. vocabulary size).
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Components that cannot be combined (language mismatch, bad settings).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation was violated.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

class EncodingError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace detox

#endif  // DETOX_ERRORS_H_
