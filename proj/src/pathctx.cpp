#include "codeattn/pathctx.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "codeattn/error.hpp"

namespace codeattn {

namespace {

struct Meeting {
  NodeId ancestor;
  NodeId branch_a;  // child of `ancestor` on the way to a
  NodeId branch_b;
  int up;    // edges from a to ancestor
  int down;  // edges from ancestor to b
};

// Lowest common ancestor by depth-equalising parent walks. Terminals are leaves,
// so neither argument can be an ancestor of the other.
Meeting meet(const SyntaxTree& tree, NodeId a, NodeId b) {
  Meeting m{};
  NodeId ua = a, ub = b;
  NodeId prev_a = a, prev_b = b;
  while (tree.depth(ua) > tree.depth(ub)) {
    prev_a = ua;
    ua = *tree.node(ua).parent;
    ++m.up;
  }
  while (tree.depth(ub) > tree.depth(ua)) {
    prev_b = ub;
    ub = *tree.node(ub).parent;
    ++m.down;
  }
  while (ua != ub) {
    prev_a = ua;
    prev_b = ub;
    ua = *tree.node(ua).parent;
    ub = *tree.node(ub).parent;
    ++m.up;
    ++m.down;
  }
  m.ancestor = ua;
  m.branch_a = prev_a;
  m.branch_b = prev_b;
  return m;
}

int child_index(const SyntaxNode& parent, NodeId child) {
  const auto it = std::find(parent.children.begin(), parent.children.end(), child);
  return static_cast<int>(it - parent.children.begin());
}

int width_of(const SyntaxTree& tree, const Meeting& m) {
  const SyntaxNode& lca = tree.node(m.ancestor);
  return std::abs(child_index(lca, m.branch_a) - child_index(lca, m.branch_b));
}

bool by_position(const SyntaxTree& tree, const PathContext& x, const PathContext& y) {
  const Span& xs = tree.node(x.start_terminal).span;
  const Span& ys = tree.node(y.start_terminal).span;
  if (xs != ys) return start_before(xs, ys);
  return start_before(tree.node(x.end_terminal).span, tree.node(y.end_terminal).span);
}

}  // namespace

void ExtractionLimits::validate() const {
  if (max_length < 1 || max_width < 1 || max_contexts < 1) {
    throw Error(ErrorKind::Config, "extraction limits must all be >= 1");
  }
}

PathContext make_path_context(const SyntaxTree& tree, NodeId a, NodeId b) {
  if (start_before(tree.node(b).span, tree.node(a).span)) std::swap(a, b);
  const Meeting m = meet(tree, a, b);

  PathContext pc;
  pc.start_terminal = a;
  pc.end_terminal = b;
  pc.length = m.up + m.down;
  pc.width = width_of(tree, m);
  pc.node_path.reserve(static_cast<std::size_t>(pc.length) + 1);
  for (NodeId n = a; n != m.ancestor; n = *tree.node(n).parent) pc.node_path.push_back(n);
  pc.ancestor_index = pc.node_path.size();
  pc.node_path.push_back(m.ancestor);
  const std::size_t down_from = pc.node_path.size();
  for (NodeId n = b; n != m.ancestor; n = *tree.node(n).parent) pc.node_path.push_back(n);
  std::reverse(pc.node_path.begin() + static_cast<std::ptrdiff_t>(down_from), pc.node_path.end());
  return pc;
}

std::vector<PathContext> enumerate_path_contexts(const SyntaxTree& tree,
                                                 const ExtractionLimits& limits) {
  limits.validate();
  const std::vector<NodeId>& terminals = tree.terminals();
  std::vector<PathContext> out;
  for (std::size_t i = 0; i < terminals.size(); ++i) {
    for (std::size_t j = i + 1; j < terminals.size(); ++j) {
      const Meeting m = meet(tree, terminals[i], terminals[j]);
      if (m.up + m.down > limits.max_length) continue;
      if (width_of(tree, m) > limits.max_width) continue;
      out.push_back(make_path_context(tree, terminals[i], terminals[j]));
    }
  }
  // terminals are already in source order, so the pairs come out sorted
  return out;
}

std::vector<PathContext> cap_path_contexts(const SyntaxTree& tree, std::vector<PathContext> contexts,
                                           int max_contexts) {
  const auto cap = static_cast<std::size_t>(std::max(max_contexts, 0));
  if (contexts.size() > cap) {
    std::stable_sort(contexts.begin(), contexts.end(), [&](const PathContext& x, const PathContext& y) {
      if (x.length != y.length) return x.length < y.length;
      return by_position(tree, x, y);
    });
    contexts.resize(cap);
  }
  std::stable_sort(contexts.begin(), contexts.end(),
                   [&](const PathContext& x, const PathContext& y) { return by_position(tree, x, y); });
  return contexts;
}

std::vector<PathContext> extract_path_contexts(const SyntaxTree& tree, const ExtractionLimits& limits) {
  return cap_path_contexts(tree, enumerate_path_contexts(tree, limits), limits.max_contexts);
}

std::string canonical_string(const SyntaxTree& tree, const PathContext& pc) {
  std::string out;
  const auto token_text = [&](NodeId id) {
    const Token* token = tree.token_of(id);
    return token != nullptr ? token->text : std::string();
  };
  out += token_text(pc.start_terminal);
  out += ',';
  for (std::size_t i = 0; i < pc.node_path.size(); ++i) {
    if (i > 0) out += i <= pc.ancestor_index ? '^' : '_';
    out += tree.node(pc.node_path[i]).type_name();
  }
  out += ',';
  out += token_text(pc.end_terminal);
  return out;
}

std::string dump_contexts(const SyntaxTree& tree, std::span<const PathContext> contexts) {
  std::string out;
  for (const auto& pc : contexts) {
    out += canonical_string(tree, pc);
    out += '\n';
  }
  return out;
}

}  // namespace codeattn
