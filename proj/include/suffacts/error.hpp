#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace suffacts {

// Base for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a schema, label space or operation contract.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed text at a known position. `offset` is a byte offset for
// bracketed trees and a 1-based line number for JSONL files.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : ValidationError(what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Leaf tokens of a tree do not line up with its surface string.
class AlignmentError : public ValidationError {
 public:
  AlignmentError(const std::string& what, std::string token)
      : ValidationError(what), token_(std::move(token)) {}
  const std::string& token() const noexcept { return token_; }

 private:
  std::string token_;
};

// Non-finite value or degenerate vector in the loss kernels.
class NumericError : public Error {
 public:
  using Error::Error;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  explicit IoError(const std::string& what, std::size_t written = 0)
      : Error(what), written_(written) {}
  // Records successfully written before the failure.
  std::size_t written() const noexcept { return written_; }

 private:
  std::size_t written_;
};

}  // namespace suffacts
