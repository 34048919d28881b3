#include "codeattn/error.hpp"

namespace codeattn {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Encoding: return "EncodingError";
    case ErrorKind::UnknownNode: return "UnknownNode";
    case ErrorKind::Format: return "FormatError";
    case ErrorKind::Value: return "ValueError";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::LayoutOverflow: return "LayoutOverflow";
    case ErrorKind::BadDownsample: return "BadDownsample";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::DegenerateGaze: return "DegenerateGaze";
    case ErrorKind::MalformedCurve: return "MalformedCurve";
    case ErrorKind::InsufficientSnippets: return "InsufficientSnippets";
    case ErrorKind::Config: return "ConfigError";
  }
  return "Error";
}

ParseError::ParseError(int line, int col, const std::string& msg)
    : Error(ErrorKind::Parse,
            std::to_string(line + 1) + ":" + std::to_string(col + 1) + ": " + msg),
      line_(line),
      col_(col) {}

FormatError::FormatError(std::string source, int line, const std::string& msg)
    : Error(ErrorKind::Format, source + ":" + std::to_string(line) + ": " + msg), line_(line) {}

}  // namespace codeattn
