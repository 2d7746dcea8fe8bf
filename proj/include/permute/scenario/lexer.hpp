#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "permute/scenario/ast.hpp"

namespace permute::scenario {

enum class Tok { Name, Int, String, Punct, End };

struct Token {
  Tok type = Tok::End;
  std::string text;
  std::int64_t value = 0;
  SourcePos pos;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  SourcePos pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t n = 1) {
    for (; n > 0 && i < src.size(); --n, ++i) {
      if (src[i] == '\n') {
        ++pos.line;
        pos.col = 1;
      } else {
        ++pos.col;
      }
    }
  };

  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    Token tok;
    tok.pos = pos;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      tok.type = Tok::Name;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      tok.type = Tok::Int;
      tok.text = std::string(src.substr(i, j - i));
      auto [ptr, ec] = std::from_chars(src.data() + i, src.data() + j, tok.value);
      if (ec != std::errc{}) throw ScenarioError(pos, "integer literal out of range: " + tok.text);
      advance(j - i);
    } else if (c == '"') {
      std::size_t j = i + 1;
      std::string text;
      while (j < src.size() && src[j] != '"' && src[j] != '\n') {
        if (src[j] == '\\' && j + 1 < src.size() && (src[j + 1] == '"' || src[j + 1] == '\\')) ++j;
        text += src[j++];
      }
      if (j >= src.size() || src[j] != '"') throw ScenarioError(pos, "unterminated string");
      tok.type = Tok::String;
      tok.text = std::move(text);
      advance(j + 1 - i);
    } else {
      static constexpr std::string_view two[] = {"<=", ">=", "==", "!=", "&&", "||"};
      tok.type = Tok::Punct;
      for (auto op : two)
        if (src.substr(i, 2) == op) tok.text = std::string(op);
      if (tok.text.empty()) {
        if (std::string_view("{}();=,+-*<>!").find(c) == std::string_view::npos)
          throw ScenarioError(pos, std::string("unexpected character '") + c + "'");
        tok.text = std::string(1, c);
      }
      advance(tok.text.size());
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.pos = pos;
  out.push_back(end);
  return out;
}

}  // namespace permute::scenario
