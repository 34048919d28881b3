#pragma once

#include <stdexcept>
#include <string>

namespace codeattn {

enum class ErrorKind {
  Parse,
  Encoding,
  UnknownNode,
  Format,
  Value,
  EmptyInput,
  LayoutOverflow,
  BadDownsample,
  Io,
  DegenerateGaze,
  MalformedCurve,
  InsufficientSnippets,
  Config,
};

const char* to_string(ErrorKind kind);

/// Base error for every failure the library reports. `kind()` lets callers
/// (the CLI in particular) map failures onto exit codes without RTTI games.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Syntax error at a 0-based (line, col) position.
class ParseError : public Error {
 public:
  ParseError(int line, int col, const std::string& msg);

  int line() const noexcept { return line_; }
  int col() const noexcept { return col_; }

 private:
  int line_;
  int col_;
};

/// Malformed record in a text input; `line` is 1-based.
class FormatError : public Error {
 public:
  FormatError(std::string source, int line, const std::string& msg);

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace codeattn
