// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace ringqed
{

// Numeric values are part of the C ABI (see include/ringqed/ringqed.h).
enum class ErrorCode : int
{
  Ok = 0,
  InvalidArgument = 1,
  Range = 2,
  NoMode = 3,
  Numeric = 4,
  Geometry = 5,
  Config = 6,
  Singularity = 7,
  NotFound = 8,
  Fit = 9,
  InsufficientSignal = 10,
  Untrapped = 11,
  Undefined = 12,
  Io = 13,
  Internal = 99
};

const char *error_code_name(ErrorCode code);

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string &what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

// Eigensolver failure. Carries the Arnoldi diagnostics.
class NumericError : public Error
{
public:
  NumericError(const std::string &what, int iterations, double residual)
    : Error(ErrorCode::Numeric, what), iterations_(iterations), residual_(residual)
  {
  }
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

private:
  int iterations_;
  double residual_;
};

// Root search that never bracketed its target; reports how close it got.
class NotFoundError : public Error
{
public:
  NotFoundError(const std::string &what, double best_mismatch)
    : Error(ErrorCode::NotFound, what), best_mismatch_(best_mismatch)
  {
  }
  double best_mismatch() const noexcept { return best_mismatch_; }

private:
  double best_mismatch_;
};

// Configuration problem anchored to a source line (0 when unknown).
class ConfigError : public Error
{
public:
  ConfigError(const std::string &what, int line = 0)
    : Error(ErrorCode::Config, line > 0 ? "line " + std::to_string(line) + ": " + what : what),
      line_(line)
  {
  }
  int line() const noexcept { return line_; }

private:
  int line_;
};

}  // namespace ringqed
