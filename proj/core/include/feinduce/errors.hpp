// Copyright 2026 The feinduce Authors.
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

#ifndef FEINDUCE_ERRORS_HPP_
#define FEINDUCE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace feinduce {

// Malformed or inconsistent input data. Maps to CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string &what) : std::runtime_error(what) {}
  DataError(const std::string &what, long line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  // 1-based line number in the offending file, or 0 when not applicable.
  long line() const { return line_; }

 private:
  long line_ = 0;
};

// Non-finite values or degenerate geometry during optimization or
// embedding. Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string &what)
      : std::runtime_error(what) {}
};

// Invalid configuration or command-line usage. Maps to CLI exit code 1.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string &what) : std::runtime_error(what) {}
};

// Emits a warning line on stderr. All library diagnostics go through here.
void warn(const std::string &message);

}  // namespace feinduce

#endif  // FEINDUCE_ERRORS_HPP_
