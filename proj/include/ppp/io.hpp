#pragma once

#include <istream>
#include <stdexcept>
#include <string>

#include "ppp/matrix.hpp"

namespace ppp {

/// Malformed instance file; line is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// One decimal integer per line; blank lines and lines starting with '#'
/// are ignored. Entries must be >= 1.
Instance parse_instance(std::istream& in);
Instance read_instance_file(const std::string& path);

}  // namespace ppp
