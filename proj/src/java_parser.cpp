// Recursive-descent parser for Java source. It builds only the tree shape,
// node kinds and spans the attention pipeline needs; there is no name
// resolution or type checking, and ambiguous constructs (casts, generic
// local declarations, lambdas) are resolved by bounded backtracking.

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "codeattn/error.hpp"
#include "codeattn/syntax.hpp"
#include "java_lexer.hpp"
#include "utf8.hpp"

namespace codeattn {

namespace {

using java::LexKind;
using java::Lexeme;

struct ProtoNode {
  NodeKind kind;
  int first = -1;  // lexeme range covered by the node
  int last = -1;
  int token_first = -1;  // representative token lexeme range, -1 if none
  int token_last = -1;
  std::vector<int> children;
};

constexpr std::array<std::string_view, 8> kPrimitives = {"boolean", "byte", "char",  "short",
                                                          "int",     "long", "float", "double"};

constexpr std::array<std::string_view, 12> kModifierKeywords = {
    "public",   "protected",    "private",   "static",   "abstract", "final",
    "native",   "synchronized", "transient", "volatile", "strictfp", "default"};

const std::array<std::vector<std::pair<std::string_view, NodeKind>>, 10> kBinaryLevels = {{
    {{"||", NodeKind::Or}},
    {{"&&", NodeKind::And}},
    {{"|", NodeKind::BinOr}},
    {{"^", NodeKind::Xor}},
    {{"&", NodeKind::BinAnd}},
    {{"==", NodeKind::Equals}, {"!=", NodeKind::NotEquals}},
    {{"<", NodeKind::LessThan},
     {">", NodeKind::GreaterThan},
     {"<=", NodeKind::LessEquals},
     {">=", NodeKind::GreaterEquals}},
    {{"<<", NodeKind::LeftShift},
     {">>", NodeKind::SignedRightShift},
     {">>>", NodeKind::UnsignedRightShift}},
    {{"+", NodeKind::Plus}, {"-", NodeKind::Minus}},
    {{"*", NodeKind::Times}, {"/", NodeKind::Divide}, {"%", NodeKind::Remainder}},
}};

constexpr int kRelationalLevel = 6;

const std::vector<std::pair<std::string_view, NodeKind>> kAssignOps = {
    {"=", NodeKind::Assign},
    {"+=", NodeKind::PlusAssign},
    {"-=", NodeKind::MinusAssign},
    {"*=", NodeKind::MultiplyAssign},
    {"/=", NodeKind::DivideAssign},
    {"%=", NodeKind::RemainderAssign},
    {"&=", NodeKind::BinAndAssign},
    {"|=", NodeKind::BinOrAssign},
    {"^=", NodeKind::XorAssign},
    {"<<=", NodeKind::LeftShiftAssign},
    {">>=", NodeKind::SignedRightShiftAssign},
    {">>>=", NodeKind::UnsignedRightShiftAssign},
};

std::optional<NodeKind> lookup(const std::vector<std::pair<std::string_view, NodeKind>>& table,
                               std::string_view op) {
  for (const auto& [text, kind] : table) {
    if (text == op) return kind;
  }
  return std::nullopt;
}

bool is_primitive(const Lexeme& lx) {
  return lx.kind == LexKind::Keyword &&
         std::find(kPrimitives.begin(), kPrimitives.end(), lx.text) != kPrimitives.end();
}

struct Operator {
  std::string text;
  int count = 0;  // lexemes spanned
};

class Parser {
 public:
  explicit Parser(const std::vector<Lexeme>& lexemes) : lx_(lexemes) {}

  int parse_compilation_unit() {
    std::vector<int> children;
    const Mark start = mark();
    auto leading = parse_modifiers();
    if (at("package")) {
      const int kw = consume();
      leading.push_back(parse_name());
      const int semi = expect(";");
      children.push_back(make(NodeKind::PackageDeclaration, start.pos, semi, kw, std::move(leading)));
    } else {
      restore(start);
    }
    while (at("import")) {
      const int kw = consume();
      std::vector<int> parts;
      if (at("static")) {
        const int s = consume();
        parts.push_back(make(NodeKind::Modifier, s, s, s, {}));
      }
      parts.push_back(parse_name());
      if (at(".") && la(1).is("*")) {
        consume();
        consume();
      }
      const int semi = expect(";");
      children.push_back(make(NodeKind::ImportDeclaration, kw, semi, kw, std::move(parts)));
    }
    while (!at_end()) {
      if (at(";")) {
        consume();
        continue;
      }
      parse_member(children);
    }
    const int first = lx_.size() > 1 ? 0 : -1;
    const int last = static_cast<int>(lx_.size()) - 2;
    return make(NodeKind::CompilationUnit, first, last, -1, std::move(children));
  }

  std::vector<ProtoNode>& protos() { return proto_; }

 private:
  // -- cursor ---------------------------------------------------------------

  struct Mark {
    int pos;
    std::size_t protos;
  };

  Mark mark() const { return {pos_, proto_.size()}; }
  void restore(const Mark& m) {
    pos_ = m.pos;
    proto_.resize(m.protos);
  }

  const Lexeme& cur() const { return lx_[static_cast<std::size_t>(pos_)]; }
  const Lexeme& la(int k) const {
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(pos_ + k), lx_.size() - 1);
    return lx_[i];
  }
  const Lexeme& at_index(int i) const { return lx_[static_cast<std::size_t>(i)]; }
  bool at(std::string_view t) const { return cur().is(t); }
  bool at_ident() const { return cur().kind == LexKind::Identifier; }
  bool at_ident(std::string_view t) const { return at_ident() && cur().text == t; }
  bool at_end() const { return cur().kind == LexKind::End; }
  int consume() { return at_end() ? pos_ : pos_++; }

  bool adjacent(int a, int b) const {
    return at_index(a).byte_end == at_index(b).byte_begin;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(cur().line, cur().col, msg);
  }

  std::string describe(const Lexeme& l) const {
    return l.kind == LexKind::End ? std::string("end of input") : "'" + std::string(l.text) + "'";
  }

  int expect(std::string_view t) {
    if (!at(t)) fail("expected '" + std::string(t) + "' but found " + describe(cur()));
    return consume();
  }

  int expect_ident() {
    if (!at_ident()) fail("expected identifier but found " + describe(cur()));
    return consume();
  }

  // Children arrive by rvalue reference so that callers may read them in the
  // other arguments of the same call.
  int make(NodeKind kind, int first, int last, int token, std::vector<int>&& children) {
    return make_range(kind, first, last, token, token, std::move(children));
  }

  int make_range(NodeKind kind, int first, int last, int token_first, int token_last,
                 std::vector<int>&& children) {
    proto_.push_back({kind, first, last, token_first, token_last, std::move(children)});
    return static_cast<int>(proto_.size()) - 1;
  }

  int leaf(NodeKind kind, int lexeme) { return make(kind, lexeme, lexeme, lexeme, {}); }

  int first_of(int node) const { return proto_[static_cast<std::size_t>(node)].first; }
  int last_of(int node) const { return proto_[static_cast<std::size_t>(node)].last; }

  /// Operator starting at lexeme `p`, gluing adjacent `>` and `=` lexemes.
  Operator op_at(int p) const {
    const auto lexeme = [&](int k) -> const Lexeme& {
      return lx_[std::min<std::size_t>(static_cast<std::size_t>(p + k), lx_.size() - 1)];
    };
    const Lexeme& l = lexeme(0);
    if (l.kind != LexKind::Punct && !l.is("instanceof")) return {};
    if (!l.is(">")) return {std::string(l.text), 1};
    int n = 1;
    while (n < 3 && lexeme(n).is(">") && adjacent(p + n - 1, p + n)) ++n;
    if (lexeme(n).is("=") && adjacent(p + n - 1, p + n)) {
      return {std::string(static_cast<std::size_t>(n), '>') + "=", n + 1};
    }
    return {std::string(static_cast<std::size_t>(n), '>'), n};
  }

  Operator peek_op() const { return op_at(pos_); }

  // -- names, modifiers, annotations -----------------------------------------

  int parse_name() {
    std::vector<int> parts;
    const int first = pos_;
    parts.push_back(leaf(NodeKind::SimpleName, expect_ident()));
    while (at(".") && la(1).kind == LexKind::Identifier) {
      consume();
      parts.push_back(leaf(NodeKind::SimpleName, consume()));
    }
    return make(NodeKind::Name, first, pos_ - 1, -1, std::move(parts));
  }

  bool at_modifier() const {
    if (cur().kind == LexKind::Keyword) {
      if (at("default") && (la(1).is(":") || la(1).is("->"))) return false;
      return std::find(kModifierKeywords.begin(), kModifierKeywords.end(), cur().text) !=
             kModifierKeywords.end();
    }
    if (at("@")) return !la(1).is("interface");
    if (at_ident("sealed")) return la(1).kind == LexKind::Keyword || la(1).kind == LexKind::Identifier;
    if (at_ident("non")) {
      return la(1).is("-") && la(2).kind == LexKind::Identifier && la(2).text == "sealed" &&
             adjacent(pos_, pos_ + 1) && adjacent(pos_ + 1, pos_ + 2);
    }
    return false;
  }

  std::vector<int> parse_modifiers() {
    std::vector<int> mods;
    while (at_modifier()) {
      if (at("@")) {
        mods.push_back(parse_annotation());
      } else if (at_ident("non")) {
        const int first = pos_;
        pos_ += 3;
        mods.push_back(make_range(NodeKind::Modifier, first, first + 2, first, first + 2, {}));
      } else {
        mods.push_back(leaf(NodeKind::Modifier, consume()));
      }
    }
    return mods;
  }

  int parse_annotation() {
    const int first = expect("@");
    std::vector<int> children;
    children.push_back(leaf(NodeKind::SimpleName, expect_ident()));
    while (at(".") && la(1).kind == LexKind::Identifier) {
      consume();
      children.push_back(leaf(NodeKind::SimpleName, consume()));
    }
    if (at("(")) {
      consume();
      while (!at(")")) {
        if (at_ident() && la(1).is("=")) {
          const int name = leaf(NodeKind::SimpleName, consume());
          const int eq = consume();
          const int value = parse_element_value();
          children.push_back(make(NodeKind::MemberValuePair, first_of(name), last_of(value), eq,
                                  {name, value}));
        } else {
          children.push_back(parse_element_value());
        }
        if (!at(",")) break;
        consume();
      }
      expect(")");
    }
    return make(NodeKind::AnnotationExpr, first, pos_ - 1, -1, std::move(children));
  }

  int parse_element_value() {
    if (at("@")) return parse_annotation();
    if (at("{")) {
      const int first = consume();
      std::vector<int> items;
      while (!at("}")) {
        items.push_back(parse_element_value());
        if (!at(",")) break;
        consume();
      }
      const int last = expect("}");
      return make(NodeKind::ArrayInitializerExpr, first, last, -1, std::move(items));
    }
    return parse_conditional();
  }

  // -- types ----------------------------------------------------------------

  std::vector<int> parse_type_arguments() {
    expect("<");
    std::vector<int> args;
    if (at(">")) {
      consume();  // diamond
      return args;
    }
    while (true) {
      while (at("@")) parse_annotation();
      if (at("?")) {
        const int q = consume();
        std::vector<int> bound;
        if (at("extends") || at("super")) {
          consume();
          bound.push_back(parse_type());
        }
        const int last = bound.empty() ? q : last_of(bound.back());
        args.push_back(make(NodeKind::WildcardType, q, last, q, std::move(bound)));
      } else {
        args.push_back(parse_type());
      }
      if (!at(",")) break;
      consume();
    }
    expect(">");
    return args;
  }

  int parse_class_type() {
    while (at("@")) parse_annotation();
    const int first = expect_ident();
    std::vector<int> args;
    if (at("<")) args = parse_type_arguments();
    int type = -1;
    if (args.empty() && !at_index(pos_ - 1).is(">")) {
      type = leaf(NodeKind::ClassOrInterfaceType, first);
    } else {
      std::vector<int> children{leaf(NodeKind::SimpleName, first)};
      children.insert(children.end(), args.begin(), args.end());
      type = make(NodeKind::ClassOrInterfaceType, first, pos_ - 1, -1, std::move(children));
    }
    while (at(".") && la(1).kind == LexKind::Identifier) {
      consume();
      const int seg = consume();
      std::vector<int> children{type, leaf(NodeKind::SimpleName, seg)};
      if (at("<")) {
        auto more = parse_type_arguments();
        children.insert(children.end(), more.begin(), more.end());
      }
      type = make(NodeKind::ClassOrInterfaceType, first, pos_ - 1, -1, std::move(children));
    }
    return type;
  }

  int wrap_dims(int type) {
    while (at("[") && la(1).is("]")) {
      consume();
      const int close = consume();
      type = make(NodeKind::ArrayType, first_of(type), close, -1, {type});
    }
    return type;
  }

  int parse_type() {
    int type = -1;
    if (is_primitive(cur())) {
      type = leaf(NodeKind::PrimitiveType, consume());
    } else if (at_ident() || at("@")) {
      type = parse_class_type();
    } else {
      fail("expected type but found " + describe(cur()));
    }
    return wrap_dims(type);
  }

  int parse_result_type() {
    if (at("void")) return leaf(NodeKind::VoidType, consume());
    return parse_type();
  }

  std::vector<int> parse_type_parameters() {
    expect("<");
    std::vector<int> params;
    while (true) {
      while (at("@")) parse_annotation();
      const int name = expect_ident();
      std::vector<int> children{leaf(NodeKind::SimpleName, name)};
      if (at("extends")) {
        consume();
        children.push_back(parse_type());
        while (at("&")) {
          consume();
          children.push_back(parse_type());
        }
      }
      params.push_back(make(NodeKind::TypeParameter, name, pos_ - 1, -1, std::move(children)));
      if (!at(",")) break;
      consume();
    }
    expect(">");
    return params;
  }

  void parse_type_list(std::vector<int>& out) {
    out.push_back(parse_type());
    while (at(",")) {
      consume();
      out.push_back(parse_type());
    }
  }

  // -- declarations -----------------------------------------------------------

  void parse_member(std::vector<int>& out) {
    if (at(";")) {
      consume();
      return;
    }
    const int first = pos_;
    if (at("static") && la(1).is("{")) {
      const int kw = consume();
      const int body = parse_block();
      out.push_back(make(NodeKind::InitializerDeclaration, kw, last_of(body), kw, {body}));
      return;
    }
    if (at("{")) {
      const int body = parse_block();
      out.push_back(make(NodeKind::InitializerDeclaration, first, last_of(body), -1, {body}));
      return;
    }
    auto mods = parse_modifiers();
    if (auto decl = try_parse_type_declaration(first, mods)) {
      out.push_back(*decl);
      return;
    }
    std::vector<int> children = std::move(mods);
    if (at("<")) {
      auto tps = parse_type_parameters();
      children.insert(children.end(), tps.begin(), tps.end());
    }
    if (at_ident() && (la(1).is("(") || la(1).is("{"))) {
      // constructor; `Name {` is a compact record constructor
      children.push_back(leaf(NodeKind::SimpleName, consume()));
      if (at("(")) parse_parameters(children);
      if (at("throws")) {
        consume();
        parse_type_list(children);
      }
      const int body = parse_block();
      children.push_back(body);
      out.push_back(make(NodeKind::ConstructorDeclaration, first, last_of(body), -1, std::move(children)));
      return;
    }
    const int type = parse_result_type();
    children.push_back(type);
    const int name = expect_ident();
    if (at("(")) {
      children.push_back(leaf(NodeKind::SimpleName, name));
      parse_parameters(children);
      while (at("[") && la(1).is("]")) pos_ += 2;
      if (at("throws")) {
        consume();
        parse_type_list(children);
      }
      NodeKind kind = NodeKind::MethodDeclaration;
      if (at("default")) {
        consume();
        children.push_back(parse_element_value());
        kind = NodeKind::AnnotationMemberDeclaration;
      }
      int last = -1;
      if (at("{")) {
        const int body = parse_block();
        children.push_back(body);
        last = last_of(body);
      } else {
        last = expect(";");
      }
      out.push_back(make(kind, first, last, -1, std::move(children)));
      return;
    }
    children.push_back(parse_declarator(name));
    while (at(",")) {
      consume();
      children.push_back(parse_declarator(expect_ident()));
    }
    const int semi = expect(";");
    out.push_back(make(NodeKind::FieldDeclaration, first, semi, -1, std::move(children)));
  }

  std::optional<int> try_parse_type_declaration(int first, std::vector<int>& mods) {
    if (at("class") || at("interface")) return parse_class_declaration(first, std::move(mods));
    if (at("enum")) return parse_enum_declaration(first, std::move(mods));
    if (at("@") && la(1).is("interface")) {
      consume();
      const int kw = consume();
      std::vector<int> children = std::move(mods);
      children.push_back(leaf(NodeKind::SimpleName, expect_ident()));
      const int last = parse_class_body(children);
      return make(NodeKind::AnnotationDeclaration, first, last, kw, std::move(children));
    }
    if (at_ident("record") && la(1).kind == LexKind::Identifier && (la(2).is("(") || la(2).is("<"))) {
      const int kw = consume();
      std::vector<int> children = std::move(mods);
      children.push_back(leaf(NodeKind::SimpleName, consume()));
      if (at("<")) {
        auto tps = parse_type_parameters();
        children.insert(children.end(), tps.begin(), tps.end());
      }
      parse_parameters(children);
      if (at("implements")) {
        consume();
        parse_type_list(children);
      }
      const int last = parse_class_body(children);
      return make(NodeKind::RecordDeclaration, first, last, kw, std::move(children));
    }
    return std::nullopt;
  }

  int parse_class_declaration(int first, std::vector<int> mods) {
    const int kw = consume();
    std::vector<int> children = std::move(mods);
    children.push_back(leaf(NodeKind::SimpleName, expect_ident()));
    if (at("<")) {
      auto tps = parse_type_parameters();
      children.insert(children.end(), tps.begin(), tps.end());
    }
    if (at("extends")) {
      consume();
      parse_type_list(children);
    }
    if (at("implements")) {
      consume();
      parse_type_list(children);
    }
    if (at_ident("permits")) {
      consume();
      parse_type_list(children);
    }
    const int last = parse_class_body(children);
    return make(NodeKind::ClassOrInterfaceDeclaration, first, last, kw, std::move(children));
  }

  int parse_enum_declaration(int first, std::vector<int> mods) {
    const int kw = consume();
    std::vector<int> children = std::move(mods);
    children.push_back(leaf(NodeKind::SimpleName, expect_ident()));
    if (at("implements")) {
      consume();
      parse_type_list(children);
    }
    expect("{");
    while (!at(";") && !at("}")) {
      const int cfirst = pos_;
      std::vector<int> parts;
      while (at("@")) parts.push_back(parse_annotation());
      parts.push_back(leaf(NodeKind::SimpleName, expect_ident()));
      if (at("(")) parse_arguments(parts);
      if (at("{")) parse_class_body(parts);
      children.push_back(make(NodeKind::EnumConstantDeclaration, cfirst, pos_ - 1, -1, std::move(parts)));
      if (!at(",")) break;
      consume();
    }
    if (at(";")) {
      consume();
      while (!at("}")) {
        if (at_end()) fail("expected '}' but found end of input");
        parse_member(children);
      }
    }
    const int last = expect("}");
    return make(NodeKind::EnumDeclaration, first, last, kw, std::move(children));
  }

  /// Parses `{ members }` appending members to `out`; returns the `}` lexeme.
  int parse_class_body(std::vector<int>& out) {
    expect("{");
    while (!at("}")) {
      if (at_end()) fail("expected '}' but found end of input");
      parse_member(out);
    }
    return consume();
  }

  void parse_parameters(std::vector<int>& out) {
    expect("(");
    while (!at(")")) {
      out.push_back(parse_parameter());
      if (!at(",")) break;
      consume();
    }
    expect(")");
  }

  int parse_parameter() {
    const int first = pos_;
    std::vector<int> children = parse_modifiers();
    children.push_back(parse_type());
    int ellipsis = -1;
    if (at("...")) ellipsis = consume();
    if (at("this")) {
      // receiver parameter
      children.push_back(leaf(NodeKind::ThisExpr, consume()));
    } else {
      children.push_back(leaf(NodeKind::SimpleName, expect_ident()));
    }
    while (at("[") && la(1).is("]")) pos_ += 2;
    return make(NodeKind::Parameter, first, pos_ - 1, ellipsis, std::move(children));
  }

  int parse_declarator(int name) {
    std::vector<int> children{leaf(NodeKind::SimpleName, name)};
    while (at("[") && la(1).is("]")) pos_ += 2;
    int eq = -1;
    if (at("=")) {
      eq = consume();
      children.push_back(at("{") ? parse_array_initializer() : parse_expression());
    }
    return make(NodeKind::VariableDeclarator, name, pos_ - 1, eq, std::move(children));
  }

  // -- statements -------------------------------------------------------------

  int parse_block() {
    const int first = expect("{");
    std::vector<int> stmts;
    while (!at("}")) {
      if (at_end()) fail("expected '}' but found end of input");
      stmts.push_back(parse_statement());
    }
    const int last = consume();
    return make(NodeKind::BlockStmt, first, last, -1, std::move(stmts));
  }

  int paren_expression() {
    expect("(");
    const int e = parse_expression();
    expect(")");
    return e;
  }

  bool at_local_type_declaration() const {
    int k = 0;
    while (true) {
      const Lexeme& l = la(k);
      if (l.is("final") || l.is("abstract") || l.is("static") || l.is("strictfp")) {
        ++k;
        continue;
      }
      if (l.is("class") || l.is("interface") || l.is("enum")) return true;
      if (l.kind == LexKind::Identifier && l.text == "record" &&
          la(k + 1).kind == LexKind::Identifier && (la(k + 2).is("(") || la(k + 2).is("<"))) {
        return true;
      }
      if (l.kind == LexKind::Identifier && (l.text == "sealed" || l.text == "non")) {
        k += l.text == "non" ? 3 : 1;
        continue;
      }
      return false;
    }
  }

  int parse_statement() {
    const int first = pos_;
    if (at("{")) return parse_block();
    if (at(";")) {
      const int semi = consume();
      return make(NodeKind::EmptyStmt, semi, semi, -1, {});
    }
    if (at("if")) {
      const int kw = consume();
      std::vector<int> children{paren_expression(), parse_statement()};
      if (at("else")) {
        consume();
        children.push_back(parse_statement());
      }
      return make(NodeKind::IfStmt, kw, last_of(children.back()), kw, std::move(children));
    }
    if (at("while")) {
      const int kw = consume();
      const int cond = paren_expression();
      const int body = parse_statement();
      return make(NodeKind::WhileStmt, kw, last_of(body), kw, {cond, body});
    }
    if (at("do")) {
      const int kw = consume();
      const int body = parse_statement();
      expect("while");
      const int cond = paren_expression();
      const int semi = expect(";");
      return make(NodeKind::DoStmt, kw, semi, kw, {body, cond});
    }
    if (at("for")) return parse_for();
    if (at("switch")) return parse_switch(NodeKind::SwitchStmt);
    if (at("return") || at("throw")) {
      const bool is_return = at("return");
      const int kw = consume();
      std::vector<int> children;
      if (!at(";")) children.push_back(parse_expression());
      if (!is_return && children.empty()) fail("expected expression after 'throw'");
      const int semi = expect(";");
      return make(is_return ? NodeKind::ReturnStmt : NodeKind::ThrowStmt, kw, semi, kw,
                  std::move(children));
    }
    if (at("break") || at("continue")) {
      const bool is_break = at("break");
      const int kw = consume();
      std::vector<int> children;
      if (at_ident()) children.push_back(leaf(NodeKind::SimpleName, consume()));
      const int semi = expect(";");
      return make(is_break ? NodeKind::BreakStmt : NodeKind::ContinueStmt, kw, semi, kw,
                  std::move(children));
    }
    if (at("try")) return parse_try();
    if (at("synchronized") && la(1).is("(")) {
      const int kw = consume();
      const int lock = paren_expression();
      const int body = parse_block();
      return make(NodeKind::SynchronizedStmt, kw, last_of(body), kw, {lock, body});
    }
    if (at("assert")) {
      const int kw = consume();
      std::vector<int> children{parse_expression()};
      if (at(":")) {
        consume();
        children.push_back(parse_expression());
      }
      const int semi = expect(";");
      return make(NodeKind::AssertStmt, kw, semi, kw, std::move(children));
    }
    if (at_ident("yield") && at_yield_statement()) {
      const int kw = consume();
      const int value = parse_expression();
      const int semi = expect(";");
      return make(NodeKind::YieldStmt, kw, semi, kw, {value});
    }
    if (at_local_type_declaration()) {
      auto mods = parse_modifiers();
      const auto decl = try_parse_type_declaration(first, mods);
      if (!decl) fail("expected type declaration");
      return make(NodeKind::LocalClassDeclarationStmt, first, last_of(*decl), -1, {*decl});
    }
    if (at_ident() && la(1).is(":")) {
      const int label = leaf(NodeKind::SimpleName, consume());
      consume();
      const int body = parse_statement();
      return make(NodeKind::LabeledStmt, first, last_of(body), -1, {label, body});
    }
    if ((at("this") || at("super")) && la(1).is("(")) {
      const int kw = consume();
      std::vector<int> args;
      parse_arguments(args);
      const int semi = expect(";");
      return make(NodeKind::ExplicitConstructorInvocationStmt, kw, semi, kw, std::move(args));
    }
    if (auto decl = try_parse_local_variable()) {
      const int semi = expect(";");
      return make(NodeKind::ExpressionStmt, first, semi, -1, {*decl});
    }
    const int expr = parse_expression();
    const int semi = expect(";");
    return make(NodeKind::ExpressionStmt, first, semi, -1, {expr});
  }

  // `yield` is contextual: `yield = 1;` or `yield(x)` keep their ordinary meaning.
  bool at_yield_statement() const {
    const Lexeme& next = la(1);
    if (next.is(".") || next.is("[") || next.is("(") || next.is("++") || next.is("--") ||
        next.is(";") || next.is("->") || next.kind == LexKind::End) {
      return false;
    }
    return !lookup(kAssignOps, op_at(pos_ + 1).text).has_value();
  }

  /// `[modifiers] Type name ...` as a VariableDeclarationExpr, or nullopt with
  /// the cursor unchanged.
  std::optional<int> try_parse_local_variable() {
    const Mark m = mark();
    const int first = pos_;
    std::vector<int> children = parse_modifiers();
    if (!is_primitive(cur()) && !at_ident() && !at("@")) {
      restore(m);
      return std::nullopt;
    }
    try {
      children.push_back(parse_type());
    } catch (const ParseError&) {
      restore(m);
      return std::nullopt;
    }
    const Lexeme& after = la(1);
    if (!at_ident() || !(after.is("=") || after.is(";") || after.is(",") || after.is("[") ||
                         after.is(":"))) {
      restore(m);
      return std::nullopt;
    }
    children.push_back(parse_declarator(consume()));
    while (at(",")) {
      consume();
      children.push_back(parse_declarator(expect_ident()));
    }
    return make(NodeKind::VariableDeclarationExpr, first, pos_ - 1, -1, std::move(children));
  }

  int parse_for() {
    const int kw = consume();
    expect("(");
    {
      // enhanced for: `for (T x : xs)`
      const Mark m = mark();
      const int first = pos_;
      std::vector<int> decl;
      bool ok = false;
      try {
        decl = parse_modifiers();
        decl.push_back(parse_type());
        if (at_ident() && la(1).is(":")) {
          const int name = consume();
          decl.push_back(make(NodeKind::VariableDeclarator, name, name, -1,
                              {leaf(NodeKind::SimpleName, name)}));
          ok = true;
        }
      } catch (const ParseError&) {
      }
      if (ok) {
        const int var = make(NodeKind::VariableDeclarationExpr, first, pos_ - 1, -1, std::move(decl));
        expect(":");
        const int iterable = parse_expression();
        expect(")");
        const int body = parse_statement();
        return make(NodeKind::ForEachStmt, kw, last_of(body), kw, {var, iterable, body});
      }
      restore(m);
    }
    std::vector<int> children;
    if (!at(";")) {
      if (auto decl = try_parse_local_variable()) {
        children.push_back(*decl);
      } else {
        parse_expression_list(children);
      }
    }
    expect(";");
    if (!at(";")) children.push_back(parse_expression());
    expect(";");
    if (!at(")")) parse_expression_list(children);
    expect(")");
    children.push_back(parse_statement());
    return make(NodeKind::ForStmt, kw, last_of(children.back()), kw, std::move(children));
  }

  void parse_expression_list(std::vector<int>& out) {
    out.push_back(parse_expression());
    while (at(",")) {
      consume();
      out.push_back(parse_expression());
    }
  }

  int parse_switch(NodeKind kind) {
    const int kw = consume();
    std::vector<int> children{paren_expression()};
    expect("{");
    while (!at("}")) {
      if (at_end()) fail("expected '}' but found end of input");
      children.push_back(parse_switch_entry());
    }
    const int last = consume();
    return make(kind, kw, last, kw, std::move(children));
  }

  int parse_case_label() {
    // type patterns: `case Circle c ->`
    const Mark m = mark();
    const int first = pos_;
    try {
      std::vector<int> children = parse_modifiers();
      children.push_back(parse_type());
      if (at_ident()) {
        const int name = consume();
        children.push_back(make(NodeKind::VariableDeclarator, name, name, -1,
                                {leaf(NodeKind::SimpleName, name)}));
        return make(NodeKind::VariableDeclarationExpr, first, name, -1, std::move(children));
      }
    } catch (const ParseError&) {
    }
    restore(m);
    return parse_conditional();
  }

  int parse_switch_entry() {
    const int first = pos_;
    std::vector<int> children;
    if (at("default")) {
      consume();
    } else {
      expect("case");
      while (true) {
        if (at("default")) {
          consume();
        } else {
          children.push_back(parse_case_label());
        }
        if (!at(",")) break;
        consume();
      }
    }
    if (at("->")) {
      consume();
      if (at("{")) {
        children.push_back(parse_block());
      } else if (at("throw")) {
        children.push_back(parse_statement());
      } else {
        const int efirst = pos_;
        const int expr = parse_expression();
        const int semi = expect(";");
        children.push_back(make(NodeKind::ExpressionStmt, efirst, semi, -1, {expr}));
      }
    } else {
      expect(":");
      while (!at("case") && !at("default") && !at("}")) {
        if (at_end()) fail("expected '}' but found end of input");
        children.push_back(parse_statement());
      }
      // `default` directly followed by a modifier-like use cannot occur here
    }
    return make(NodeKind::SwitchEntry, first, pos_ - 1, first, std::move(children));
  }

  int parse_try() {
    const int kw = consume();
    std::vector<int> children;
    if (at("(")) {
      consume();
      while (!at(")")) {
        if (auto decl = try_parse_local_variable()) {
          children.push_back(*decl);
        } else {
          children.push_back(parse_expression());
        }
        if (!at(";")) break;
        consume();
      }
      expect(")");
    }
    children.push_back(parse_block());
    bool handled = false;
    while (at("catch")) {
      handled = true;
      const int ckw = consume();
      expect("(");
      const int pfirst = pos_;
      std::vector<int> param = parse_modifiers();
      const int t0 = parse_type();
      if (at("|")) {
        std::vector<int> alts{t0};
        const int bar = pos_;
        while (at("|")) {
          consume();
          alts.push_back(parse_type());
        }
        param.push_back(make(NodeKind::UnionType, first_of(t0), pos_ - 1, bar, std::move(alts)));
      } else {
        param.push_back(t0);
      }
      param.push_back(leaf(NodeKind::SimpleName, expect_ident()));
      const int p = make(NodeKind::Parameter, pfirst, pos_ - 1, -1, std::move(param));
      expect(")");
      const int body = parse_block();
      children.push_back(make(NodeKind::CatchClause, ckw, last_of(body), ckw, {p, body}));
    }
    if (at("finally")) {
      handled = true;
      consume();
      children.push_back(parse_block());
    }
    if (!handled && at_index(kw + 1).is("{")) fail("expected 'catch' or 'finally'");
    return make(NodeKind::TryStmt, kw, pos_ - 1, kw, std::move(children));
  }

  // -- expressions --------------------------------------------------------------

  bool at_lambda() const {
    if (at_ident() && la(1).is("->")) return true;
    if (!at("(")) return false;
    int depth = 0;
    for (int k = 0;; ++k) {
      const Lexeme& l = la(k);
      if (l.kind == LexKind::End) return false;
      if (l.is("(")) ++depth;
      if (l.is(")") && --depth == 0) return la(k + 1).is("->");
    }
  }

  int parse_expression() {
    if (at_lambda()) return parse_lambda();
    const int lhs = parse_conditional();
    const Operator op = peek_op();
    if (auto kind = lookup(kAssignOps, op.text)) {
      const int tok = pos_;
      pos_ += op.count;
      const int rhs = at("{") ? parse_array_initializer() : parse_expression();
      return make_range(*kind, first_of(lhs), last_of(rhs), tok, tok + op.count - 1, {lhs, rhs});
    }
    return lhs;
  }

  int parse_lambda() {
    const int first = pos_;
    std::vector<int> children;
    if (at_ident()) {
      const int name = consume();
      children.push_back(make(NodeKind::Parameter, name, name, -1, {leaf(NodeKind::SimpleName, name)}));
    } else {
      expect("(");
      while (!at(")")) {
        if (at_ident() && (la(1).is(",") || la(1).is(")"))) {
          const int name = consume();
          children.push_back(
              make(NodeKind::Parameter, name, name, -1, {leaf(NodeKind::SimpleName, name)}));
        } else {
          children.push_back(parse_parameter());
        }
        if (!at(",")) break;
        consume();
      }
      expect(")");
    }
    const int arrow = expect("->");
    const int body = at("{") ? parse_block() : parse_expression();
    children.push_back(body);
    return make(NodeKind::LambdaExpr, first, last_of(body), arrow, std::move(children));
  }

  int parse_conditional() {
    const int cond = parse_binary(0);
    if (!at("?")) return cond;
    const int q = consume();
    const int then = parse_expression();
    expect(":");
    const int otherwise = at_lambda() ? parse_lambda() : parse_conditional();
    return make(NodeKind::ConditionalExpr, first_of(cond), last_of(otherwise), q,
                {cond, then, otherwise});
  }

  int parse_binary(int level) {
    if (level == static_cast<int>(kBinaryLevels.size())) return parse_unary();
    int lhs = parse_binary(level + 1);
    while (true) {
      const Operator op = peek_op();
      if (level == kRelationalLevel && op.text == "instanceof") {
        const int kw = consume();
        const int rfirst = pos_;
        std::vector<int> rhs = parse_modifiers();
        rhs.push_back(parse_type());
        int rhs_node = rhs.back();
        if (at_ident() && !la(1).is("(")) {
          // pattern binding: `x instanceof String s`
          const int name = consume();
          rhs.push_back(make(NodeKind::VariableDeclarator, name, name, -1,
                             {leaf(NodeKind::SimpleName, name)}));
          rhs_node = make(NodeKind::VariableDeclarationExpr, rfirst, name, -1, std::move(rhs));
        }
        lhs = make(NodeKind::InstanceOfExpr, first_of(lhs), last_of(rhs_node), kw, {lhs, rhs_node});
        continue;
      }
      const auto kind = lookup(kBinaryLevels[static_cast<std::size_t>(level)], op.text);
      if (!kind) return lhs;
      const int tok = pos_;
      pos_ += op.count;
      const int rhs = parse_binary(level + 1);
      lhs = make_range(*kind, first_of(lhs), last_of(rhs), tok, tok + op.count - 1, {lhs, rhs});
    }
  }

  static bool starts_cast_operand(const Lexeme& l) {
    if (l.kind == LexKind::Identifier || l.is_literal()) return true;
    if (l.kind == LexKind::Keyword) {
      return l.text == "this" || l.text == "super" || l.text == "new" || l.text == "switch" ||
             is_primitive(l) || l.text == "void";
    }
    return l.is("(") || l.is("!") || l.is("~");
  }

  std::optional<int> try_parse_cast() {
    const Mark m = mark();
    const int open = consume();
    try {
      const bool primitive = is_primitive(cur());
      std::vector<int> children{parse_type()};
      while (at("&")) {
        consume();
        children.push_back(parse_type());
      }
      if (at(")") && (primitive || starts_cast_operand(la(1)))) {
        consume();
        const int operand = at_lambda() ? parse_lambda() : parse_unary();
        children.push_back(operand);
        return make(NodeKind::CastExpr, open, last_of(operand), -1, std::move(children));
      }
    } catch (const ParseError&) {
    }
    restore(m);
    return std::nullopt;
  }

  int parse_unary() {
    static const std::vector<std::pair<std::string_view, NodeKind>> kPrefix = {
        {"+", NodeKind::UnaryPlus},         {"-", NodeKind::UnaryMinus},
        {"++", NodeKind::PreIncrement},     {"--", NodeKind::PreDecrement},
        {"!", NodeKind::LogicalComplement}, {"~", NodeKind::BitwiseComplement},
    };
    if (cur().kind == LexKind::Punct) {
      if (auto kind = lookup(kPrefix, cur().text)) {
        const int tok = consume();
        const int operand = parse_unary();
        return make(*kind, tok, last_of(operand), tok, {operand});
      }
    }
    if (at("(")) {
      if (auto cast = try_parse_cast()) return *cast;
    }
    int expr = parse_primary();
    while (at("++") || at("--")) {
      const NodeKind kind = at("++") ? NodeKind::PostIncrement : NodeKind::PostDecrement;
      const int tok = consume();
      expr = make(kind, first_of(expr), tok, tok, {expr});
    }
    return expr;
  }

  /// Appends call arguments; returns the `)` lexeme.
  int parse_arguments(std::vector<int>& out) {
    expect("(");
    while (!at(")")) {
      out.push_back(parse_expression());
      if (!at(",")) break;
      consume();
    }
    return expect(")");
  }

  int parse_array_initializer() {
    const int first = expect("{");
    std::vector<int> items;
    while (!at("}")) {
      items.push_back(at("{") ? parse_array_initializer() : parse_expression());
      if (!at(",")) break;
      consume();
    }
    const int last = expect("}");
    return make(NodeKind::ArrayInitializerExpr, first, last, -1, std::move(items));
  }

  int parse_creator(std::optional<int> scope) {
    const int kw = expect("new");
    const int first = scope ? first_of(*scope) : kw;
    std::vector<int> children;
    if (scope) children.push_back(*scope);
    if (at("<")) {
      auto args = parse_type_arguments();
      children.insert(children.end(), args.begin(), args.end());
    }
    const int type = is_primitive(cur()) ? leaf(NodeKind::PrimitiveType, consume()) : parse_class_type();
    children.push_back(type);
    if (at("[")) {
      while (at("[")) {
        const int open = consume();
        std::vector<int> dim;
        if (!at("]")) dim.push_back(parse_expression());
        const int close = expect("]");
        children.push_back(make(NodeKind::ArrayCreationLevel, open, close, -1, std::move(dim)));
      }
      if (at("{")) children.push_back(parse_array_initializer());
      return make(NodeKind::ArrayCreationExpr, first, pos_ - 1, kw, std::move(children));
    }
    if (proto_[static_cast<std::size_t>(type)].kind == NodeKind::PrimitiveType) {
      fail("expected '[' after primitive type in array creation");
    }
    int last = parse_arguments(children);
    if (at("{")) last = parse_class_body(children);
    return make(NodeKind::ObjectCreationExpr, first, last, kw, std::move(children));
  }

  int parse_primary() {
    const int first = pos_;
    const Lexeme& l = cur();
    int expr = -1;
    if (l.is_literal()) {
      expr = leaf(literal_kind(l), consume());
    } else if (at("this")) {
      expr = leaf(NodeKind::ThisExpr, consume());
    } else if (at("super")) {
      expr = leaf(NodeKind::SuperExpr, consume());
    } else if (at("new")) {
      expr = parse_creator(std::nullopt);
    } else if (at("switch")) {
      expr = parse_switch(NodeKind::SwitchExpr);
    } else if (at("(")) {
      consume();
      const int inner = parse_expression();
      const int close = expect(")");
      expr = make(NodeKind::EnclosedExpr, first, close, -1, {inner});
    } else if (is_primitive(l) || at("void") ||
               (l.kind == LexKind::Identifier && la(1).is("[") && la(2).is("]"))) {
      // class literal or array constructor reference: `int[].class`, `String[]::new`
      const int type = parse_result_type();
      if (at("::")) {
        expr = type;
      } else {
        expect(".");
        const int kw = expect("class");
        expr = make(NodeKind::ClassExpr, first, kw, kw, {type});
      }
    } else if (l.kind == LexKind::Identifier) {
      const int name = consume();
      if (at("(")) {
        std::vector<int> children{leaf(NodeKind::SimpleName, name)};
        const int close = parse_arguments(children);
        expr = make(NodeKind::MethodCallExpr, first, close, -1, std::move(children));
      } else {
        expr = leaf(NodeKind::NameExpr, name);
      }
    } else {
      fail("expected expression but found " + describe(l));
    }
    return parse_selectors(expr);
  }

  int parse_selectors(int expr) {
    while (true) {
      const int first = first_of(expr);
      if (at(".")) {
        consume();
        if (at("new")) {
          expr = parse_creator(expr);
        } else if (at("this") || at("super") || at("class")) {
          const NodeKind kind = at("this")    ? NodeKind::ThisExpr
                                : at("super") ? NodeKind::SuperExpr
                                              : NodeKind::ClassExpr;
          const int kw = consume();
          expr = make(kind, first, kw, kw, {expr});
        } else {
          std::vector<int> children{expr};
          if (at("<")) {
            auto args = parse_type_arguments();
            children.insert(children.end(), args.begin(), args.end());
          }
          children.push_back(leaf(NodeKind::SimpleName, expect_ident()));
          if (at("(")) {
            const int close = parse_arguments(children);
            expr = make(NodeKind::MethodCallExpr, first, close, -1, std::move(children));
          } else {
            expr = make(NodeKind::FieldAccessExpr, first, pos_ - 1, -1, std::move(children));
          }
        }
      } else if (at("[") && !la(1).is("]")) {
        consume();
        const int index = parse_expression();
        const int close = expect("]");
        expr = make(NodeKind::ArrayAccessExpr, first, close, -1, {expr, index});
      } else if (at("::")) {
        const int op = consume();
        std::vector<int> children{expr};
        if (at("<")) {
          auto args = parse_type_arguments();
          children.insert(children.end(), args.begin(), args.end());
        }
        int last = pos_;
        if (at("new")) {
          consume();
        } else {
          children.push_back(leaf(NodeKind::SimpleName, expect_ident()));
        }
        expr = make(NodeKind::MethodReferenceExpr, first, last, op, std::move(children));
      } else {
        return expr;
      }
    }
  }

  static NodeKind literal_kind(const Lexeme& l) {
    switch (l.kind) {
      case LexKind::IntLiteral: return NodeKind::IntegerLiteral;
      case LexKind::LongLiteral: return NodeKind::LongLiteral;
      case LexKind::FloatLiteral: return NodeKind::DoubleLiteral;
      case LexKind::CharLiteral: return NodeKind::CharLiteral;
      case LexKind::StringLiteral: return NodeKind::StringLiteral;
      case LexKind::TextBlock: return NodeKind::TextBlockLiteral;
      default: break;
    }
    return l.text == "null" ? NodeKind::NullLiteral : NodeKind::BooleanLiteral;
  }

  const std::vector<Lexeme>& lx_;
  int pos_ = 0;
  std::vector<ProtoNode> proto_;
};

// Converts the proto arena into the public pre-order representation.
class TreeBuilder {
 public:
  TreeBuilder(const std::vector<Lexeme>& lexemes, const std::vector<ProtoNode>& protos,
              const SourceSnippet& snippet)
      : lx_(lexemes), protos_(protos), snippet_(snippet) {}

  SyntaxTree build(int root) {
    visit(root, std::nullopt);
    return SyntaxTree(snippet_, std::move(nodes_), std::move(tokens_));
  }

 private:
  Span span_of(int first, int last) const {
    if (first < 0) return {};
    const Lexeme& a = lx_[static_cast<std::size_t>(first)];
    const Lexeme& b = lx_[static_cast<std::size_t>(last)];
    return {a.line, a.col, b.end_line, b.end_col};
  }

  void visit(int proto_index, std::optional<NodeId> parent) {
    const ProtoNode& p = protos_[static_cast<std::size_t>(proto_index)];
    const auto id = static_cast<NodeId>(nodes_.size());
    SyntaxNode node;
    node.id = id;
    node.kind = p.kind;
    node.span = span_of(p.first, p.last);
    node.parent = parent;
    if (p.token_first >= 0) {
      const Lexeme& a = lx_[static_cast<std::size_t>(p.token_first)];
      const Lexeme& b = lx_[static_cast<std::size_t>(p.token_last)];
      Token token;
      token.owner = id;
      token.span = {a.line, a.col, b.end_line, b.end_col};
      token.text = std::string(snippet_.text.substr(a.byte_begin, b.byte_end - a.byte_begin));
      if (token.span.end_line != token.span.start_line) {
        // multi-line text blocks: the token is the opening line only
        const std::size_t nl = token.text.find('\n');
        token.text.resize(nl);
        if (!token.text.empty() && token.text.back() == '\r') token.text.pop_back();
        token.span.end_line = token.span.start_line;
        token.span.end_col = token.span.start_col + static_cast<int>(utf8::count_code_points(token.text));
      }
      const bool value_token = a.kind == LexKind::Identifier || a.is_literal();
      node.is_terminal = p.children.empty() && p.token_first == p.token_last && value_token;
      tokens_.push_back(std::move(token));
    }
    nodes_.push_back(std::move(node));
    for (int child : p.children) {
      nodes_[static_cast<std::size_t>(id)].children.push_back(static_cast<NodeId>(nodes_.size()));
      visit(child, id);
    }
  }

  const std::vector<Lexeme>& lx_;
  const std::vector<ProtoNode>& protos_;
  const SourceSnippet& snippet_;
  std::vector<SyntaxNode> nodes_;
  std::vector<Token> tokens_;
};

}  // namespace

SyntaxTree parse_source(const SourceSnippet& snippet) {
  if (const std::size_t bad = utf8::find_invalid(snippet.text); bad != std::string::npos) {
    throw Error(ErrorKind::Encoding,
                "invalid UTF-8 at byte " + std::to_string(bad) + " of '" + snippet.id + "'");
  }
  const std::vector<java::Lexeme> lexemes = java::lex(snippet.text);
  Parser parser(lexemes);
  const int root = parser.parse_compilation_unit();
  return TreeBuilder(lexemes, parser.protos(), snippet).build(root);
}

}  // namespace codeattn
