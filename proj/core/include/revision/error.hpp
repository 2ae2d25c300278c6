// Copyright (C) 2026 Revision Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace revision {

// Error taxonomy shared by the library and the CLI exit-code mapping:
// user/config problems exit 2, external-service problems exit 3.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad arguments to an operation (ratio out of range, length mismatch, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Malformed input file; message carries the offending line when known.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error(msg), line_(0) {}
  ParseError(const std::string& msg, int line)
      : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Semantic constraint violated by otherwise well-formed input.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Non-finite values or other numeric breakdowns.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Failure talking to an external provider (LLM endpoint, OCR service).
class ProviderError : public Error {
 public:
  ProviderError(const std::string& msg, bool retryable)
      : Error(msg), retryable_(retryable) {}
  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

}  // namespace revision
