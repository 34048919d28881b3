#pragma once

#include <filesystem>
#include <string>

#include "codeattn/io.hpp"
#include "codeattn/syntax.hpp"

namespace testsupport {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(CODEATTN_FIXTURE_DIR) / name;
}

inline codeattn::SyntaxTree parse_fixture(const std::string& name) {
  const auto path = fixture(name);
  return codeattn::parse_source(codeattn::make_snippet(path.stem().string(), codeattn::read_text_file(path)));
}

inline codeattn::SyntaxTree parse_text(const std::string& text) {
  return codeattn::parse_source(codeattn::make_snippet("inline", text));
}

/// First node of the given type, or -1.
inline codeattn::NodeId find_kind(const codeattn::SyntaxTree& tree, codeattn::NodeKind kind, int skip = 0) {
  for (const auto& n : tree.nodes()) {
    if (n.kind == kind && skip-- == 0) return n.id;
  }
  return -1;
}

}  // namespace testsupport
