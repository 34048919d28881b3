#include "codeattn/syntax.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "codeattn/corpus.hpp"
#include "codeattn/error.hpp"
#include "utf8.hpp"

namespace codeattn {

namespace {

constexpr std::array<std::string_view, kNodeKindCount> kTypeNames = {
    "CompilationUnit",
    "PackageDeclaration",
    "ImportDeclaration",
    "Name",
    "SimpleName",
    "ClassOrInterfaceDeclaration",
    "EnumDeclaration",
    "RecordDeclaration",
    "AnnotationDeclaration",
    "EnumConstantDeclaration",
    "FieldDeclaration",
    "MethodDeclaration",
    "ConstructorDeclaration",
    "InitializerDeclaration",
    "AnnotationMemberDeclaration",
    "Parameter",
    "TypeParameter",
    "Modifier",
    "AnnotationExpr",
    "MemberValuePair",
    "PrimitiveType",
    "VoidType",
    "ClassOrInterfaceType",
    "ArrayType",
    "WildcardType",
    "UnionType",
    "BlockStmt",
    "ExpressionStmt",
    "VariableDeclarationExpr",
    "VariableDeclarator",
    "IfStmt",
    "WhileStmt",
    "DoStmt",
    "ForStmt",
    "ForEachStmt",
    "SwitchStmt",
    "SwitchEntry",
    "BreakStmt",
    "ContinueStmt",
    "ReturnStmt",
    "ThrowStmt",
    "YieldStmt",
    "TryStmt",
    "CatchClause",
    "SynchronizedStmt",
    "LabeledStmt",
    "AssertStmt",
    "EmptyStmt",
    "LocalClassDeclarationStmt",
    "ExplicitConstructorInvocationStmt",
    "NameExpr",
    "FieldAccessExpr",
    "MethodCallExpr",
    "ObjectCreationExpr",
    "ArrayCreationExpr",
    "ArrayCreationLevel",
    "ArrayInitializerExpr",
    "ArrayAccessExpr",
    "CastExpr",
    "InstanceOfExpr",
    "ConditionalExpr",
    "LambdaExpr",
    "MethodReferenceExpr",
    "ThisExpr",
    "SuperExpr",
    "ClassExpr",
    "EnclosedExpr",
    "SwitchExpr",
    "Or",
    "And",
    "BinOr",
    "Xor",
    "BinAnd",
    "Equals",
    "NotEquals",
    "LessThan",
    "GreaterThan",
    "LessEquals",
    "GreaterEquals",
    "LeftShift",
    "SignedRightShift",
    "UnsignedRightShift",
    "Plus",
    "Minus",
    "Times",
    "Divide",
    "Remainder",
    "UnaryPlus",
    "UnaryMinus",
    "PreIncrement",
    "PreDecrement",
    "PostIncrement",
    "PostDecrement",
    "LogicalComplement",
    "BitwiseComplement",
    "Assign",
    "PlusAssign",
    "MinusAssign",
    "MultiplyAssign",
    "DivideAssign",
    "RemainderAssign",
    "BinAndAssign",
    "BinOrAssign",
    "XorAssign",
    "LeftShiftAssign",
    "SignedRightShiftAssign",
    "UnsignedRightShiftAssign",
    "IntegerLiteral",
    "LongLiteral",
    "DoubleLiteral",
    "CharLiteral",
    "StringLiteral",
    "TextBlockLiteral",
    "BooleanLiteral",
    "NullLiteral",
};

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (true) {
    const std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.emplace_back(text.substr(start));
      break;
    }
    lines.emplace_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

}  // namespace

std::string_view type_name(NodeKind kind) {
  return kTypeNames[static_cast<std::size_t>(kind)];
}

std::optional<NodeKind> kind_from_name(std::string_view name) {
  const auto it = std::find(kTypeNames.begin(), kTypeNames.end(), name);
  if (it == kTypeNames.end()) return std::nullopt;
  return static_cast<NodeKind>(it - kTypeNames.begin());
}

bool Span::contains(const Span& other) const {
  const auto start = std::pair{start_line, start_col};
  const auto end = std::pair{end_line, end_col};
  return start <= std::pair{other.start_line, other.start_col} &&
         std::pair{other.end_line, other.end_col} <= end;
}

bool start_before(const Span& a, const Span& b) {
  return std::tie(a.start_line, a.start_col, a.end_line, a.end_col) <
         std::tie(b.start_line, b.start_col, b.end_line, b.end_col);
}

int count_lines(std::string_view text) {
  if (!text.empty() && text.back() == '\n') text.remove_suffix(1);
  return static_cast<int>(std::count(text.begin(), text.end(), '\n')) + 1;
}

SourceSnippet make_snippet(std::string id, std::string text, bool normalize) {
  SourceSnippet snippet;
  snippet.id = std::move(id);
  snippet.text = normalize ? normalize_indent(text) : std::move(text);
  snippet.line_count = count_lines(snippet.text);
  snippet.normalized = normalize || snippet.text.find('\t') == std::string::npos;
  return snippet;
}

SyntaxTree::SyntaxTree(SourceSnippet snippet, std::vector<SyntaxNode> nodes,
                       std::vector<Token> tokens)
    : snippet_(std::move(snippet)), nodes_(std::move(nodes)), tokens_(std::move(tokens)) {
  lines_ = split_lines(snippet_.text);
  token_index_.assign(nodes_.size(), -1);
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    token_index_[static_cast<std::size_t>(tokens_[i].owner)] = static_cast<int>(i);
  }
  depth_.assign(nodes_.size(), 0);
  for (const auto& n : nodes_) {
    // pre-order ids: parents are always visited first
    if (n.parent) depth_[static_cast<std::size_t>(n.id)] = depth_[static_cast<std::size_t>(*n.parent)] + 1;
    if (n.is_terminal) terminals_.push_back(n.id);
  }
  std::sort(terminals_.begin(), terminals_.end(), [this](NodeId a, NodeId b) {
    return start_before(nodes_[static_cast<std::size_t>(a)].span,
                        nodes_[static_cast<std::size_t>(b)].span);
  });
}

bool SyntaxTree::contains(NodeId id) const {
  return id >= 0 && static_cast<std::size_t>(id) < nodes_.size();
}

const SyntaxNode& SyntaxTree::node(NodeId id) const {
  if (!contains(id)) {
    throw Error(ErrorKind::UnknownNode, "node " + std::to_string(id) + " is not in the tree");
  }
  return nodes_[static_cast<std::size_t>(id)];
}

const Token* SyntaxTree::token_of(NodeId id) const {
  node(id);
  const int idx = token_index_[static_cast<std::size_t>(id)];
  return idx < 0 ? nullptr : &tokens_[static_cast<std::size_t>(idx)];
}

std::string SyntaxTree::slice(const Span& span) const {
  std::string out;
  for (int line = span.start_line; line <= span.end_line; ++line) {
    if (line < 0 || static_cast<std::size_t>(line) >= lines_.size()) break;
    const std::string_view text = lines_[static_cast<std::size_t>(line)];
    const std::size_t from = line == span.start_line ? utf8::byte_offset(text, span.start_col) : 0;
    const std::size_t to = line == span.end_line ? utf8::byte_offset(text, span.end_col) : text.size();
    if (line != span.start_line) out += '\n';
    if (to > from) out.append(text.substr(from, to - from));
  }
  return out;
}

std::optional<Token> node_token(const SyntaxTree& tree, NodeId node) {
  const Token* token = tree.token_of(node);
  if (token == nullptr) return std::nullopt;
  return *token;
}

std::vector<NodeId> list_terminals(const SyntaxTree& tree) { return tree.terminals(); }

std::string dump_ast(const SyntaxTree& tree) {
  std::ostringstream out;
  for (const auto& n : tree.nodes()) {
    out << n.id << '\t' << n.type_name() << '\t' << n.span.start_line + 1 << ':'
        << n.span.start_col + 1 << '-' << n.span.end_line + 1 << ':' << n.span.end_col + 1 << '\t';
    if (const Token* token = tree.token_of(n.id)) out << token->text;
    out << '\n';
  }
  return out.str();
}

}  // namespace codeattn
