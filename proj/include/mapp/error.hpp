#pragma once

#include <stdexcept>
#include <string>

namespace mapp {

// Malformed input files (maps, scenarios, traces, caches).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column = -1)
      : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& what, int line, int column) {
    std::string s = what + " (line " + std::to_string(line);
    if (column >= 0) s += ", column " + std::to_string(column);
    s += ")";
    return s;
  }
  int line_;
  int column_;
};

// A caller broke a documented precondition or an internal invariant failed.
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

inline void require(bool cond, const char* what) {
  if (!cond) throw ContractViolation(what);
}

}  // namespace mapp
