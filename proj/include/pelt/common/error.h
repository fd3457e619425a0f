// Copyright 2026 The pelt Authors.
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

#ifndef PELT_COMMON_ERROR_H_
#define PELT_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace pelt {

// Root of every error raised by the library. The CLI maps these to exit
// status 1; anything else escaping main is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

// A caller broke a documented precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class LengthError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class CorruptionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class FingerprintError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class NoOccurrencesError : public Error {
 public:
  explicit NoOccurrencesError(std::string entity_id)
      : Error("no occurrences for entity '" + entity_id + "'"),
        entity_id_(std::move(entity_id)) {}

  const std::string& entity_id() const { return entity_id_; }

 private:
  std::string entity_id_;
};

class DegenerateDirectionError : public Error {
 public:
  using Error::Error;
};

}  // namespace pelt

#endif  // PELT_COMMON_ERROR_H_
