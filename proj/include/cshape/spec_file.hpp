#pragma once

#include <stdexcept>
#include <string>

#include "cshape/substitution.hpp"

namespace cshape {

/// Malformed or invalid substitution file; line and column are 1-based (0 when not tied to a location).
class SpecError : public std::runtime_error {
 public:
  SpecError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

Substitution parse_spec(const std::string& text);
Substitution load_spec(const std::string& path);
std::string serialize_spec(const Substitution& z);

}  // namespace cshape
