#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace morphmine {

// Malformed input data (bad UTF-8, bad count field, empty file, ...).
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A key (prefix, word, token) that is not present in a structure.
class lookup_error : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Caller violated a precondition of an algorithm.
class contract_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace morphmine
