// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gae {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand dimensions do not agree with the model or with each other.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Input values are unusable (NaN, Inf).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Caller violated a precondition (empty batch, invalid option, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Requested feature exists conceptually but is not implemented.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
 public:
  DivergenceError(int epoch, const std::string& what)
      : Error("diverged at epoch " + std::to_string(epoch) + ": " + what), epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

/// Model archive is unreadable: bad version, truncated payload, checksum mismatch.
class ArchiveError : public Error {
 public:
  using Error::Error;
};

}  // namespace gae
