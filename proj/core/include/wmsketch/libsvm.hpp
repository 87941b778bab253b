#pragma once

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wmsketch/types.hpp"

namespace wmsketch::io {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, size_t line, size_t column);

  size_t line() const { return line_; }
  size_t column() const { return column_; }

 private:
  size_t line_;
  size_t column_;
};

// "label idx:val ...". Labels +1/1 mean +1, -1/0 mean -1. Duplicate indices
// coalesce by summation; indices must fit 32 bits. column is 1-based.
LabeledExample parse_libsvm_line(const std::string& line, size_t line_no = 1);

// Blank lines are skipped.
std::vector<LabeledExample> parse_libsvm(std::istream& in);
std::vector<LabeledExample> load_libsvm(const std::string& path);

}  // namespace wmsketch::io
