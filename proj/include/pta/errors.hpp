#pragma once

#include <stdexcept>
#include <string>

namespace pta {

/// Error raised by the text parsers. Carries a 1-based line number
/// (0 when the input is a single-line fragment such as a tree literal).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, int line = 0, int column = 0)
      : std::runtime_error(format(message, line, column)),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& message, int line, int column) {
    if (line <= 0) return message;
    std::string out = "line " + std::to_string(line);
    if (column > 0) out += ", col " + std::to_string(column);
    return out + ": " + message;
  }

  int line_;
  int column_;
};

}  // namespace pta
