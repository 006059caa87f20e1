#pragma once

#include <stdexcept>
#include <string>

namespace groove {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Input file is readable but its encoding or layout is not supported.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A numeric argument is outside its valid domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Series is too short for the requested operation.
class LengthError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public Error {
 public:
  using Error::Error;
};

/// An annotation edit could not be resolved. `index()` is the zero-based edit position.
class EditError : public Error {
 public:
  EditError(std::size_t index, const std::string& what)
      : Error("edit " + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class EstimationError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

/// Swing ratio requested without the interval classes it needs.
class UndefinedRatioError : public Error {
 public:
  using Error::Error;
};

}  // namespace groove
