// Copyright 2026 The gcalb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace gcalb
{

using cplx = std::complex<double>;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double pi = 3.14159265358979323846;

enum class ErrorCode
{
  invalid_argument = 1,
  not_converged = 2,
  unsupported = 3,
  numerical = 4,
  io = 5,
};

// Base of every error raised by the library. The C API maps `code()` onto its
// status values.
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string &what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

class InvalidArgument : public Error
{
public:
  explicit InvalidArgument(const std::string &what) : Error(ErrorCode::invalid_argument, what) {}
};

class ConvergenceError : public Error
{
public:
  explicit ConvergenceError(const std::string &what) : Error(ErrorCode::not_converged, what) {}
};

class UnsupportedError : public Error
{
public:
  explicit UnsupportedError(const std::string &what) : Error(ErrorCode::unsupported, what) {}
};

class NumericalError : public Error
{
public:
  explicit NumericalError(const std::string &what) : Error(ErrorCode::numerical, what) {}
};

class IoError : public Error
{
public:
  explicit IoError(const std::string &what) : Error(ErrorCode::io, what) {}
};

inline void require(bool condition, const std::string &what)
{
  if (!condition)
  {
    throw InvalidArgument(what);
  }
}

}  // namespace gcalb
