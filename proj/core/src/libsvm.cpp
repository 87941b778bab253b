#include "wmsketch/libsvm.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>

namespace wmsketch::io {

ParseError::ParseError(const std::string& what, size_t line, size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + what),
      line_(line),
      column_(column) {}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

struct Token {
  std::string text;
  size_t column = 0;  // 1-based
};

std::vector<Token> split(const std::string& line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    if (i >= line.size()) break;
    size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

int parse_label(const Token& tok, size_t line_no) {
  if (tok.text == "+1" || tok.text == "1") return 1;
  if (tok.text == "-1" || tok.text == "0") return -1;
  throw ParseError("bad label '" + tok.text + "'", line_no, tok.column);
}

std::pair<feature_t, double> parse_entry(const Token& tok, size_t line_no) {
  size_t colon = tok.text.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= tok.text.size())
    throw ParseError("expected index:value, got '" + tok.text + "'", line_no, tok.column);

  const std::string idx = tok.text.substr(0, colon);
  for (char c : idx) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ParseError("bad feature index '" + idx + "'", line_no, tok.column);
  }
  errno = 0;
  char* end = nullptr;
  unsigned long long raw = std::strtoull(idx.c_str(), &end, 10);
  if (errno != 0 || *end != '\0' || raw > std::numeric_limits<uint32_t>::max())
    throw ParseError("feature index out of range '" + idx + "'", line_no, tok.column);

  const std::string val = tok.text.substr(colon + 1);
  errno = 0;
  end = nullptr;
  double v = std::strtod(val.c_str(), &end);
  if (errno != 0 || end != val.c_str() + val.size() || val.empty())
    throw ParseError("bad value '" + val + "'", line_no, tok.column + colon + 1);
  if (!std::isfinite(v))
    throw ParseError("non-finite value '" + val + "'", line_no, tok.column + colon + 1);
  return {static_cast<feature_t>(raw), v};
}

}  // namespace

LabeledExample parse_libsvm_line(const std::string& line, size_t line_no) {
  auto tokens = split(line);
  if (tokens.empty()) throw ParseError("missing label", line_no, 1);
  LabeledExample ex;
  ex.y = parse_label(tokens[0], line_no);
  std::vector<std::pair<feature_t, double>> entries;
  entries.reserve(tokens.size() - 1);
  for (size_t i = 1; i < tokens.size(); ++i) entries.push_back(parse_entry(tokens[i], line_no));
  ex.x = SparseVector::from_pairs(std::move(entries));
  return ex;
}

std::vector<LabeledExample> parse_libsvm(std::istream& in) {
  std::vector<LabeledExample> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    bool blank = true;
    for (char c : line) {
      if (!is_space(c)) {
        blank = false;
        break;
      }
    }
    if (blank) continue;
    out.push_back(parse_libsvm_line(line, line_no));
  }
  return out;
}

std::vector<LabeledExample> load_libsvm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_libsvm(in);
}

}  // namespace wmsketch::io
