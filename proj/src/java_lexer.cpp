#include "java_lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "codeattn/error.hpp"
#include "utf8.hpp"

namespace codeattn::java {

namespace {

constexpr std::array<std::string_view, 53> kKeywords = {
    "abstract", "assert",     "boolean",  "break",     "byte",      "case",     "catch",
    "char",     "class",      "const",    "continue",  "default",   "do",       "double",
    "else",     "enum",       "extends",  "final",     "finally",   "float",    "for",
    "goto",     "if",         "implements", "import",  "instanceof", "int",     "interface",
    "long",     "native",     "new",      "package",   "private",   "protected", "public",
    "return",   "short",      "static",   "strictfp",  "super",     "switch",   "synchronized",
    "this",     "throw",      "throws",   "transient", "try",       "void",     "volatile",
    "while",    "true",       "false",    "null",
};

// Longest first within each leading character.
constexpr std::array<std::string_view, 45> kPuncts = {
    "...", "<<=", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", "+=", "-=", "*=", "/=",
    "&=",  "|=",  "^=", "%=", "<<", "(",  ")",  "{",  "}",  "[",  "]",  ";",  ",",  ".",  "@",
    "=",   ">",   "<",  "!",  "~",  "?",  ":",  "+",  "-",  "*",  "/",  "&",  "|",  "^",  "%",
};

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80; }
bool ident_part(unsigned char c) { return ident_start(c) || std::isdigit(c); }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Lexeme> run() {
    std::vector<Lexeme> out;
    while (true) {
      skip_trivia();
      if (pos_ >= src_.size()) break;
      out.push_back(next());
    }
    Lexeme end;
    end.kind = LexKind::End;
    end.byte_begin = end.byte_end = src_.size();
    end.line = end.end_line = line_;
    end.col = end.end_col = col_;
    out.push_back(end);
    return out;
  }

 private:
  char peek(std::size_t k = 0) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

  void advance() {
    const auto c = static_cast<unsigned char>(src_[pos_]);
    if (c == '\n') {
      ++line_;
      col_ = 0;
      ++pos_;
      return;
    }
    const std::size_t len = utf8::sequence_length(c);
    pos_ += len == 0 ? 1 : len;
    ++col_;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, col_, msg); }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        const int l = line_, cl = col_;
        advance();
        advance();
        while (pos_ < src_.size() && !(peek() == '*' && peek(1) == '/')) advance();
        if (pos_ >= src_.size()) throw ParseError(l, cl, "unterminated comment");
        advance();
        advance();
      } else {
        break;
      }
    }
  }

  Lexeme next() {
    Lexeme lx;
    lx.byte_begin = pos_;
    lx.line = line_;
    lx.col = col_;
    const auto c = static_cast<unsigned char>(peek());
    if (ident_start(c)) {
      while (pos_ < src_.size() && ident_part(static_cast<unsigned char>(peek()))) advance();
      lx.kind = LexKind::Identifier;
    } else if (std::isdigit(c) || (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      lx.kind = number();
    } else if (c == '\'') {
      quoted('\'');
      lx.kind = LexKind::CharLiteral;
    } else if (c == '"' && peek(1) == '"' && peek(2) == '"') {
      text_block();
      lx.kind = LexKind::TextBlock;
    } else if (c == '"') {
      quoted('"');
      lx.kind = LexKind::StringLiteral;
    } else {
      const std::string_view rest = src_.substr(pos_);
      const auto it = std::find_if(kPuncts.begin(), kPuncts.end(),
                                   [&](std::string_view p) { return rest.starts_with(p); });
      if (it == kPuncts.end()) fail(std::string("unexpected character '") + static_cast<char>(c) + "'");
      for (std::size_t i = 0; i < it->size(); ++i) advance();
      lx.kind = LexKind::Punct;
    }
    lx.byte_end = pos_;
    lx.end_line = line_;
    lx.end_col = col_;
    lx.text = src_.substr(lx.byte_begin, lx.byte_end - lx.byte_begin);
    if (lx.kind == LexKind::Identifier && is_java_keyword(lx.text)) lx.kind = LexKind::Keyword;
    return lx;
  }

  void digits(bool hex) {
    while (pos_ < src_.size()) {
      const auto d = static_cast<unsigned char>(peek());
      if (std::isdigit(d) || d == '_' || (hex && std::isxdigit(d))) {
        advance();
      } else {
        break;
      }
    }
  }

  LexKind number() {
    bool floating = false;
    const bool hex = peek() == '0' && (peek(1) == 'x' || peek(1) == 'X');
    const bool bin = peek() == '0' && (peek(1) == 'b' || peek(1) == 'B');
    if (hex || bin) {
      advance();
      advance();
    }
    digits(hex);
    if (peek() == '.' && !bin) {
      const auto after = static_cast<unsigned char>(peek(1));
      // the dot belongs to the literal unless a member name or another dot follows
      if (!ident_start(after) || after == 'e' || after == 'E' || after == 'f' || after == 'F' ||
          after == 'd' || after == 'D' || (hex && std::isxdigit(after))) {
        if (after != '.') {
          floating = true;
          advance();
          digits(hex);
        }
      }
    }
    const char e = peek();
    if ((!hex && (e == 'e' || e == 'E')) || (hex && (e == 'p' || e == 'P'))) {
      floating = true;
      advance();
      if (peek() == '+' || peek() == '-') advance();
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("malformed exponent");
      digits(false);
    }
    const char s = peek();
    if (s == 'l' || s == 'L') {
      advance();
      return LexKind::LongLiteral;
    }
    if (s == 'f' || s == 'F' || s == 'd' || s == 'D') {
      advance();
      return LexKind::FloatLiteral;
    }
    if (ident_part(static_cast<unsigned char>(peek()))) fail("malformed number literal");
    return floating ? LexKind::FloatLiteral : LexKind::IntLiteral;
  }

  void quoted(char quote) {
    const int l = line_, cl = col_;
    advance();
    while (true) {
      if (pos_ >= src_.size() || peek() == '\n') {
        throw ParseError(l, cl, quote == '"' ? "unterminated string literal" : "unterminated char literal");
      }
      if (peek() == '\\') {
        advance();
        if (pos_ < src_.size() && peek() != '\n') advance();
        continue;
      }
      if (peek() == quote) {
        advance();
        return;
      }
      advance();
    }
  }

  void text_block() {
    const int l = line_, cl = col_;
    for (int i = 0; i < 3; ++i) advance();
    while (pos_ < src_.size()) {
      if (peek() == '\\') {
        advance();
        if (pos_ < src_.size()) advance();
        continue;
      }
      if (peek() == '"' && peek(1) == '"' && peek(2) == '"') {
        for (int i = 0; i < 3; ++i) advance();
        return;
      }
      advance();
    }
    throw ParseError(l, cl, "unterminated text block");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 0;
  int col_ = 0;
};

}  // namespace

bool is_java_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::vector<Lexeme> lex(std::string_view source) { return Lexer(source).run(); }

}  // namespace codeattn::java
