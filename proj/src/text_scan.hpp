#pragma once

#include <cctype>
#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pfs/errors.hpp"

namespace pfs::detail {

struct Token {
  std::string_view text;
  std::size_t line;
  std::size_t column;
};

/// Splits on whitespace, tracking 1-based line and column of every token.
/// Characters in `separators` also end a line.
inline std::vector<Token> tokenize(std::string_view text, std::string_view separators = {}) {
  std::vector<Token> tokens;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n' || separators.find(c) != std::string_view::npos) {
      ++line;
      column = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++column;
      ++i;
      continue;
    }
    std::size_t start = i;
    std::size_t start_column = column;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
           separators.find(text[i]) == std::string_view::npos) {
      ++i;
      ++column;
    }
    tokens.push_back({text.substr(start, i - start), line, start_column});
  }
  return tokens;
}

inline int to_int(const Token& token) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(token.text.data(), token.text.data() + token.text.size(), value);
  if (ec != std::errc{} || ptr != token.text.data() + token.text.size())
    throw ParseError("expected an integer, got '" + std::string(token.text) + "'", token.line,
                     token.column);
  return value;
}

}  // namespace pfs::detail
