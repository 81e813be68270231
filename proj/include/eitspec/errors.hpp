// Copyright 2026 The eitspec Authors
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

namespace eitspec {

// Base class for every error raised by the library. Callers that only care
// about "numerical failure vs. success" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class NoUniqueSteadyState : public Error {
 public:
  using Error::Error;
};

// The top Fock level carries more population than the configured tolerance.
class TruncationInsufficient : public Error {
 public:
  TruncationInsufficient(const std::string& what, double top_population,
                         int fock_dim)
      : Error(what), top_population_(top_population), fock_dim_(fock_dim) {}

  double top_population() const { return top_population_; }
  int fock_dim() const { return fock_dim_; }

 private:
  double top_population_;
  int fock_dim_;
};

class IntegrationFailure : public Error {
 public:
  using Error::Error;
};

class NotInEitRegime : public Error {
 public:
  using Error::Error;
};

class NeedsFinerGrid : public Error {
 public:
  using Error::Error;
};

class RegimeError : public Error {
 public:
  using Error::Error;
};

class DegenerateFit : public Error {
 public:
  using Error::Error;
};

class SelectionFailure : public Error {
 public:
  using Error::Error;
};

class GuessFailure : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line) : Error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

}  // namespace eitspec
