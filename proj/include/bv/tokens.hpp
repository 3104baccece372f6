#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace bv {

struct Token {
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

/// Whitespace-separated tokens with 1-based positions; '#' starts a comment.
inline std::vector<Token> tokenize(const std::string &text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  bool in_comment = false;
  Token cur;
  auto flush = [&] {
    if (!cur.text.empty())
      out.push_back(cur);
    cur.text.clear();
  };
  for (char ch : text) {
    if (ch == '\n') {
      flush();
      in_comment = false;
      ++line;
      col = 1;
      continue;
    }
    if (!in_comment && ch == '#') {
      flush();
      in_comment = true;
    }
    if (!in_comment) {
      if (ch == ' ' || ch == '\t' || ch == '\r') {
        flush();
      } else {
        if (cur.text.empty()) {
          cur.line = line;
          cur.column = col;
        }
        cur.text.push_back(ch);
      }
    }
    ++col;
  }
  flush();
  return out;
}

} // namespace bv
