#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace secblocks {

enum class ErrorKind {
  Syntax,
  UnknownKind,
  DanglingReference,
  DuplicateId,
  InvalidModel,
  UnknownScenario,
  PatternViolation,
  DanglingMapping,
  EmptySelectors,
  InvalidSelector,
  MissingLabel,
  DanglingProfileReference,
  Config,
  UnsupportedTopology,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it onto an exit code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t line, std::size_t column)
      : Error(ErrorKind::Syntax, line == 0 ? message
                                           : message + " (line " + std::to_string(line) +
                                                 ", column " + std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace secblocks
