#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace codeattn {

using NodeId = std::int32_t;

/// 0-based character (code point) coordinates, end exclusive.
struct Span {
  int start_line = 0;
  int start_col = 0;
  int end_line = 0;
  int end_col = 0;

  bool contains(const Span& other) const;
  auto operator<=>(const Span&) const = default;
};

/// (line, col) lexicographic comparison of span starts, then ends.
bool start_before(const Span& a, const Span& b);

struct SourceSnippet {
  std::string id;
  std::string text;
  int line_count = 0;
  bool normalized = false;
};

/// Builds a snippet, replacing tabs when `normalize` is set.
SourceSnippet make_snippet(std::string id, std::string text, bool normalize = true);

/// Lines after trimming at most one trailing newline.
int count_lines(std::string_view text);

// Fixed node-type vocabulary. The names follow common Java AST naming; binary,
// unary and assignment operators are distinct node types so a path string
// carries the operator.
enum class NodeKind : std::uint8_t {
  CompilationUnit,
  PackageDeclaration,
  ImportDeclaration,
  Name,
  SimpleName,
  ClassOrInterfaceDeclaration,
  EnumDeclaration,
  RecordDeclaration,
  AnnotationDeclaration,
  EnumConstantDeclaration,
  FieldDeclaration,
  MethodDeclaration,
  ConstructorDeclaration,
  InitializerDeclaration,
  AnnotationMemberDeclaration,
  Parameter,
  TypeParameter,
  Modifier,
  AnnotationExpr,
  MemberValuePair,
  // types
  PrimitiveType,
  VoidType,
  ClassOrInterfaceType,
  ArrayType,
  WildcardType,
  UnionType,
  // statements
  BlockStmt,
  ExpressionStmt,
  VariableDeclarationExpr,
  VariableDeclarator,
  IfStmt,
  WhileStmt,
  DoStmt,
  ForStmt,
  ForEachStmt,
  SwitchStmt,
  SwitchEntry,
  BreakStmt,
  ContinueStmt,
  ReturnStmt,
  ThrowStmt,
  YieldStmt,
  TryStmt,
  CatchClause,
  SynchronizedStmt,
  LabeledStmt,
  AssertStmt,
  EmptyStmt,
  LocalClassDeclarationStmt,
  ExplicitConstructorInvocationStmt,
  // expressions
  NameExpr,
  FieldAccessExpr,
  MethodCallExpr,
  ObjectCreationExpr,
  ArrayCreationExpr,
  ArrayCreationLevel,
  ArrayInitializerExpr,
  ArrayAccessExpr,
  CastExpr,
  InstanceOfExpr,
  ConditionalExpr,
  LambdaExpr,
  MethodReferenceExpr,
  ThisExpr,
  SuperExpr,
  ClassExpr,
  EnclosedExpr,
  SwitchExpr,
  // binary operators
  Or,
  And,
  BinOr,
  Xor,
  BinAnd,
  Equals,
  NotEquals,
  LessThan,
  GreaterThan,
  LessEquals,
  GreaterEquals,
  LeftShift,
  SignedRightShift,
  UnsignedRightShift,
  Plus,
  Minus,
  Times,
  Divide,
  Remainder,
  // unary operators
  UnaryPlus,
  UnaryMinus,
  PreIncrement,
  PreDecrement,
  PostIncrement,
  PostDecrement,
  LogicalComplement,
  BitwiseComplement,
  // assignment operators
  Assign,
  PlusAssign,
  MinusAssign,
  MultiplyAssign,
  DivideAssign,
  RemainderAssign,
  BinAndAssign,
  BinOrAssign,
  XorAssign,
  LeftShiftAssign,
  SignedRightShiftAssign,
  UnsignedRightShiftAssign,
  // literals
  IntegerLiteral,
  LongLiteral,
  DoubleLiteral,
  CharLiteral,
  StringLiteral,
  TextBlockLiteral,
  BooleanLiteral,
  NullLiteral,
};

inline constexpr int kNodeKindCount = static_cast<int>(NodeKind::NullLiteral) + 1;

std::string_view type_name(NodeKind kind);
std::optional<NodeKind> kind_from_name(std::string_view name);

struct SyntaxNode {
  NodeId id = 0;
  NodeKind kind = NodeKind::CompilationUnit;
  Span span;
  std::optional<NodeId> parent;
  std::vector<NodeId> children;
  bool is_terminal = false;

  std::string_view type_name() const { return codeattn::type_name(kind); }
};

struct Token {
  std::string text;
  Span span;
  NodeId owner = 0;
};

/// Immutable parse result. Node ids are assigned in pre-order, so the root is
/// always 0 and a parent id is smaller than any of its descendants' ids.
class SyntaxTree {
 public:
  SyntaxTree() = default;
  SyntaxTree(SourceSnippet snippet, std::vector<SyntaxNode> nodes, std::vector<Token> tokens);

  const SourceSnippet& snippet() const { return snippet_; }
  std::span<const SyntaxNode> nodes() const { return nodes_; }
  std::span<const Token> tokens() const { return tokens_; }
  std::size_t size() const { return nodes_.size(); }
  NodeId root() const { return 0; }

  bool contains(NodeId id) const;
  /// Throws UnknownNode for ids outside the tree.
  const SyntaxNode& node(NodeId id) const;
  /// Representative token of `id`, or nullptr for structural nodes.
  const Token* token_of(NodeId id) const;
  /// Terminal nodes in source order.
  const std::vector<NodeId>& terminals() const { return terminals_; }
  int depth(NodeId id) const { return depth_.at(static_cast<std::size_t>(id)); }

  /// Source substring covered by `span`.
  std::string slice(const Span& span) const;

 private:
  SourceSnippet snippet_;
  std::vector<SyntaxNode> nodes_;
  std::vector<Token> tokens_;
  std::vector<int> token_index_;
  std::vector<NodeId> terminals_;
  std::vector<int> depth_;
  std::vector<std::string> lines_;
};

/// Parses a compilation unit, or a bare sequence of class members (methods,
/// fields, nested types). Throws ParseError or Error{Encoding}.
SyntaxTree parse_source(const SourceSnippet& snippet);

std::optional<Token> node_token(const SyntaxTree& tree, NodeId node);

std::vector<NodeId> list_terminals(const SyntaxTree& tree);

/// One node per line: `id<TAB>type<TAB>sl:sc-el:ec<TAB>token`. Lines and
/// columns are printed 1-based; the end column stays exclusive.
std::string dump_ast(const SyntaxTree& tree);

}  // namespace codeattn
