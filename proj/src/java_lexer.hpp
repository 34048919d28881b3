#pragma once

#include <string_view>
#include <vector>

namespace codeattn::java {

enum class LexKind {
  Identifier,
  Keyword,
  IntLiteral,
  LongLiteral,
  FloatLiteral,
  CharLiteral,
  StringLiteral,
  TextBlock,
  Punct,
  End,
};

struct Lexeme {
  LexKind kind = LexKind::End;
  std::string_view text;
  std::size_t byte_begin = 0;
  std::size_t byte_end = 0;
  int line = 0;
  int col = 0;
  int end_line = 0;
  int end_col = 0;

  bool is(std::string_view t) const {
    return (kind == LexKind::Punct || kind == LexKind::Keyword) && text == t;
  }
  bool is_literal() const {
    return kind == LexKind::IntLiteral || kind == LexKind::LongLiteral ||
           kind == LexKind::FloatLiteral || kind == LexKind::CharLiteral ||
           kind == LexKind::StringLiteral || kind == LexKind::TextBlock ||
           (kind == LexKind::Keyword && (text == "true" || text == "false" || text == "null"));
  }
};

/// Splits valid UTF-8 Java source into lexemes, dropping whitespace and
/// comments. `>` is always emitted as a single character so the parser can
/// close nested type arguments; shift and `>=` operators are reassembled from
/// adjacent `>`/`=` lexemes. The result always ends with an End lexeme.
std::vector<Lexeme> lex(std::string_view source);

bool is_java_keyword(std::string_view word);

}  // namespace codeattn::java
