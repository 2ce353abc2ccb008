#pragma once

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>

namespace robustelm {

/// Shapes of two operands disagree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input data is empty, non-finite or otherwise unusable.
class DataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::string shape_str(std::ptrdiff_t rows, std::ptrdiff_t cols) {
  std::ostringstream os;
  os << rows << "x" << cols;
  return os.str();
}

[[noreturn]] inline void throw_shape(const std::string& what, std::ptrdiff_t exp_rows, std::ptrdiff_t exp_cols,
                                     std::ptrdiff_t rows, std::ptrdiff_t cols) {
  throw DimensionError(what + ": expected " + shape_str(exp_rows, exp_cols) + ", got " + shape_str(rows, cols));
}

[[noreturn]] inline void throw_size(const std::string& what, std::ptrdiff_t expected, std::ptrdiff_t actual) {
  throw DimensionError(what + ": expected length " + std::to_string(expected) + ", got " + std::to_string(actual));
}

}  // namespace robustelm
