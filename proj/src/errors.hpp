#pragma once

#include <stdexcept>
#include <string>

namespace qlu {

enum class ErrorCode {
  invalid_argument = 1,
  dimension_mismatch,
  degenerate_steady_state,
  no_steady_state,
  parse_error,
  io_error,
  infeasible,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(ErrorCode::invalid_argument, what) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error(ErrorCode::dimension_mismatch, what) {}
};

// Kernel of the generator has dimension > 1: the current readout is ill-defined.
class DegenerateSteadyState : public Error {
 public:
  explicit DegenerateSteadyState(const std::string& what)
      : Error(ErrorCode::degenerate_steady_state, what) {}
};

class NoSteadyState : public Error {
 public:
  explicit NoSteadyState(const std::string& what) : Error(ErrorCode::no_steady_state, what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& file, int line, const std::string& what)
      : Error(ErrorCode::parse_error,
              file + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
        file_(file),
        line_(line) {}
  const std::string& file() const noexcept { return file_; }
  int line() const noexcept { return line_; }

 private:
  std::string file_;
  int line_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::io_error, what) {}
};

class Infeasible : public Error {
 public:
  explicit Infeasible(const std::string& what) : Error(ErrorCode::infeasible, what) {}
};

}  // namespace qlu
