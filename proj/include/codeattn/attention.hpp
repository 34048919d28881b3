#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "codeattn/pathctx.hpp"
#include "codeattn/syntax.hpp"

namespace codeattn {

struct PathAttention {
  std::string key;  // canonical path-context string
  double value = 0.0;

  bool operator==(const PathAttention&) const = default;
};

/// Parses `<key>\t<value>` records. Blank lines and lines starting with `#`
/// are skipped. Duplicate keys keep their first position and last value.
/// Throws FormatError (malformed line) or Error{Value} (negative/non-finite).
std::vector<PathAttention> parse_attention(std::string_view text,
                                           std::string_view source_name = "<attention>");
std::vector<PathAttention> load_attention(const std::filesystem::path& file);

/// 1/N for each of the N contexts, keyed by canonical string. Throws
/// Error{EmptyInput} when there are no contexts.
std::vector<PathAttention> uniform_attention(const SyntaxTree& tree,
                                             std::span<const PathContext> contexts);

struct NodeAttention {
  std::vector<double> values;  // indexed by node id
  std::size_t matched_contexts = 0;
  std::size_t unmatched_contexts = 0;
  double expected_mass = 0.0;  // sum over matched contexts of attention * path size

  double operator[](NodeId id) const { return values.at(static_cast<std::size_t>(id)); }
  double total_mass() const;
};

/// Adds each context's attention to every node on its path (terminals and the
/// common ancestor included). A key applies to every context instance with
/// that canonical string; contexts without a record contribute nothing.
NodeAttention aggregate_node_attention(const SyntaxTree& tree, std::span<const PathContext> contexts,
                                       std::span<const PathAttention> attentions);

}  // namespace codeattn
