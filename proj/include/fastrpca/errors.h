// Copyright 2026 The fastrpca Authors.
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

#ifndef FASTRPCA_ERRORS_H_
#define FASTRPCA_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fastrpca {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes disagree, a precondition is violated, or a value is out of range.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Rejected solver / CLI configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class SvdNotConverged : public Error {
 public:
  SvdNotConverged(std::size_t sweeps, double last_residual)
      : Error("svd did not converge after " + std::to_string(sweeps) +
              " sweeps (last relative residual " +
              std::to_string(last_residual) + ")"),
        sweeps_(sweeps),
        last_residual_(last_residual) {}

  std::size_t sweeps() const { return sweeps_; }
  double last_residual() const { return last_residual_; }

 private:
  std::size_t sweeps_;
  double last_residual_;
};

class Diverged : public Error {
 public:
  explicit Diverged(std::size_t iter)
      : Error("diverged; step size too large (iteration " +
              std::to_string(iter) + ")"),
        iter_(iter) {}
  std::size_t iter() const { return iter_; }

 private:
  std::size_t iter_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed input file; carries the 1-based line number (0 when the
// failure is not tied to a line, e.g. a truncated binary payload).
class ParseError : public IoError {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : IoError(path + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace fastrpca

#endif  // FASTRPCA_ERRORS_H_
