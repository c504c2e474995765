// Copyright 2026 The curvepath Authors
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

#ifndef CURVEPATH__ERRORS_HPP_
#define CURVEPATH__ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace curvepath
{

/// Base of every error thrown by the library. The CLI maps these to exit code 2.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class RangeError : public Error
{
public:
  using Error::Error;
};

class DegenerateInputError : public Error
{
public:
  using Error::Error;
};

class ConvergenceError : public Error
{
public:
  ConvergenceError(const std::string & what, double residual)
  : Error(what), residual_(residual) {}
  double residual() const noexcept {return residual_;}

private:
  double residual_;
};

class InsufficientPreviewError : public Error
{
public:
  using Error::Error;
};

class RankDeficiencyError : public Error
{
public:
  RankDeficiencyError(const std::string & what, int rank)
  : Error(what), rank_(rank) {}
  int rank() const noexcept {return rank_;}

private:
  int rank_;
};

class ParseError : public Error
{
public:
  ParseError(const std::string & what, std::size_t line)
  : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept {return line_;}

private:
  std::size_t line_;
};

class IntegrityError : public Error
{
public:
  using Error::Error;
};

class EmptyDataError : public Error
{
public:
  using Error::Error;
};

class ValidationError : public Error
{
public:
  using Error::Error;
};

}  // namespace curvepath

#endif  // CURVEPATH__ERRORS_HPP_
