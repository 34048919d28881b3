#pragma once

#include <span>
#include <string>
#include <vector>

#include "codeattn/syntax.hpp"

namespace codeattn {

struct ExtractionLimits {
  int max_length = 8;  // edges on the path
  int max_width = 2;   // child-index distance at the common ancestor
  int max_contexts = 200;

  /// Throws Error{Config} unless every limit is >= 1.
  void validate() const;
};

/// Two terminals and the node route between them through their lowest
/// common ancestor. `node_path` runs start terminal -> ancestor -> end terminal.
struct PathContext {
  NodeId start_terminal = 0;
  NodeId end_terminal = 0;
  std::vector<NodeId> node_path;
  std::size_t ancestor_index = 0;  // position of the common ancestor in node_path
  int length = 0;
  int width = 0;

  NodeId ancestor() const { return node_path[ancestor_index]; }
};

/// Builds the path between two terminals (any order in, source order out).
PathContext make_path_context(const SyntaxTree& tree, NodeId a, NodeId b);

/// Every terminal pair within the length/width limits, before the count cap,
/// sorted by (start span, end span).
std::vector<PathContext> enumerate_path_contexts(const SyntaxTree& tree, const ExtractionLimits& limits);

/// Keeps the `max_contexts` shortest paths, ties by (start span, end span), and
/// returns them in (start span, end span) order.
std::vector<PathContext> cap_path_contexts(const SyntaxTree& tree, std::vector<PathContext> contexts,
                                           int max_contexts);

std::vector<PathContext> extract_path_contexts(const SyntaxTree& tree,
                                               const ExtractionLimits& limits = {});

/// `<start token>,<Type^Type_Type>,<end token>`: `^` marks an upward step and
/// `_` a downward one.
std::string canonical_string(const SyntaxTree& tree, const PathContext& pc);

/// One canonical string per line, in the given order.
std::string dump_contexts(const SyntaxTree& tree, std::span<const PathContext> contexts);

}  // namespace codeattn
