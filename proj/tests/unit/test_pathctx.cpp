#include <doctest.h>

#include <random>

#include "codeattn/error.hpp"
#include "codeattn/pathctx.hpp"
#include "fixtures.hpp"
#include "hand_trees.hpp"
#include "path_oracle.hpp"
#include "tree_builder.hpp"

using namespace codeattn;
using testsupport::build_tree;

namespace {

std::vector<std::string> strings_of(const SyntaxTree& tree, const std::vector<PathContext>& contexts) {
  std::vector<std::string> out;
  for (const auto& pc : contexts) out.push_back(canonical_string(tree, pc));
  return out;
}

void check_against_oracle(const SyntaxTree& tree, const ExtractionLimits& limits) {
  const auto expected = oracle::all_paths(tree, limits.max_length, limits.max_width);
  const auto got = enumerate_path_contexts(tree, limits);
  REQUIRE(got.size() == expected.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].start_terminal == expected[i].start);
    CHECK(got[i].end_terminal == expected[i].end);
    CHECK(got[i].node_path == expected[i].nodes);
    CHECK(got[i].ancestor_index == expected[i].apex);
    CHECK(got[i].length == expected[i].length);
    CHECK(got[i].width == expected[i].width);
    CHECK(canonical_string(tree, got[i]) == expected[i].text);
  }
}

}  // namespace

TEST_CASE("one-line snippet matches the committed oracle dump") {
  const SyntaxTree tree = testsupport::parse_fixture("one_line.java");
  const auto contexts = extract_path_contexts(tree, {});
  const std::string dump = dump_contexts(tree, contexts);
  CHECK(dump == read_text_file(testsupport::fixture("one_line.contexts.txt")));
  check_against_oracle(tree, {});
  CHECK(contexts.size() == 15);
}

TEST_CASE("pair counts for tiny trees") {
  CHECK(extract_path_contexts(build_tree("(BlockStmt NameExpr:a NameExpr:b NameExpr:c)"), {}).size() == 3);
  CHECK(extract_path_contexts(build_tree("(BlockStmt NameExpr:a)"), {}).empty());
  CHECK(extract_path_contexts(build_tree("(BlockStmt VoidType!void)"), {}).empty());
}

TEST_CASE("canonical strings follow the up/down serialisation") {
  const SyntaxTree tree = build_tree("(GreaterThan NameExpr:x IntegerLiteral:0)");
  const auto contexts = extract_path_contexts(tree, {});
  REQUIRE(contexts.size() == 1);
  CHECK(canonical_string(tree, contexts[0]) == "x,NameExpr^GreaterThan_IntegerLiteral,0");

  const SyntaxTree deep = build_tree("(IfStmt (Equals NameExpr:a IntegerLiteral:1) (ReturnStmt NameExpr:b))");
  const auto pc = make_path_context(deep, 2, 5);
  CHECK(canonical_string(deep, pc) == "a,NameExpr^Equals^IfStmt_ReturnStmt_NameExpr,b");
  CHECK(pc.length == 4);
  CHECK(pc.width == 1);
}

TEST_CASE("make_path_context orders endpoints by source position") {
  const SyntaxTree tree = build_tree("(BlockStmt NameExpr:a (Plus NameExpr:b NameExpr:c))");
  const auto forward = make_path_context(tree, 1, 4);
  const auto backward = make_path_context(tree, 4, 1);
  CHECK(forward.node_path == backward.node_path);
  CHECK(backward.start_terminal == 1);
}

TEST_CASE("width is the child-index distance at the ancestor") {
  const SyntaxTree tree =
      build_tree("(MethodCallExpr SimpleName:f NameExpr:a NameExpr:b NameExpr:c NameExpr:d NameExpr:e)");
  const auto all = extract_path_contexts(tree, {8, 5, 200});
  CHECK(all.size() == 15);
  const auto narrow = extract_path_contexts(tree, {8, 2, 200});
  CHECK(narrow.size() == 5 + 4);
  for (const auto& pc : narrow) CHECK(pc.width <= 2);
  CHECK(make_path_context(tree, 1, 2).width == 1);
}

TEST_CASE("extracted paths satisfy the PathContext invariants") {
  for (const char* name : {"listing1.java", "java/kitchen_sink.java"}) {
    CAPTURE(name);
    const SyntaxTree tree = testsupport::parse_fixture(name);
    for (const auto& pc : extract_path_contexts(tree, {})) {
      REQUIRE(pc.node_path.size() >= 3);
      CHECK(pc.node_path.front() == pc.start_terminal);
      CHECK(pc.node_path.back() == pc.end_terminal);
      CHECK(pc.length == static_cast<int>(pc.node_path.size()) - 1);
      CHECK(start_before(tree.node(pc.start_terminal).span, tree.node(pc.end_terminal).span));
      const NodeId apex = pc.ancestor();
      CHECK(std::count(pc.node_path.begin(), pc.node_path.end(), apex) == 1);
      for (std::size_t i = 0; i + 1 < pc.node_path.size(); ++i) {
        const NodeId a = pc.node_path[i], b = pc.node_path[i + 1];
        if (i < pc.ancestor_index) {
          CHECK(tree.node(a).parent == b);
        } else {
          CHECK(tree.node(b).parent == a);
        }
      }
      // No deeper common ancestor: the two branches below the apex differ.
      CHECK(pc.node_path[pc.ancestor_index - 1] != pc.node_path[pc.ancestor_index + 1]);
    }
  }
}

TEST_CASE("cap keeps the shortest paths and re-sorts by position") {
  const SyntaxTree tree = testsupport::parse_fixture("listing1.java");
  const auto uncapped = enumerate_path_contexts(tree, {8, 2, 200});
  REQUIRE(uncapped.size() > 200);
  const auto capped = extract_path_contexts(tree, {8, 2, 200});
  CHECK(capped.size() == 200);

  int longest_kept = 0;
  for (const auto& pc : capped) longest_kept = std::max(longest_kept, pc.length);
  std::size_t strictly_shorter = 0;
  for (const auto& pc : uncapped) strictly_shorter += pc.length < longest_kept;
  CHECK(strictly_shorter <= 200);
  for (const auto& pc : uncapped) {
    if (pc.length < longest_kept) {
      const bool kept = std::any_of(capped.begin(), capped.end(), [&](const PathContext& c) {
        return c.start_terminal == pc.start_terminal && c.end_terminal == pc.end_terminal;
      });
      CHECK(kept);
    }
  }
  for (std::size_t i = 1; i < capped.size(); ++i) {
    const auto& a = capped[i - 1];
    const auto& b = capped[i];
    const bool ordered = start_before(tree.node(a.start_terminal).span, tree.node(b.start_terminal).span) ||
                         (a.start_terminal == b.start_terminal &&
                          start_before(tree.node(a.end_terminal).span, tree.node(b.end_terminal).span));
    CHECK(ordered);
  }
  // Tie-break: among the longest kept paths, the earliest by position survive.
  std::vector<const PathContext*> boundary;
  for (const auto& pc : uncapped) {
    if (pc.length == longest_kept) boundary.push_back(&pc);
  }
  std::size_t kept_boundary = 0;
  for (const auto& pc : capped) kept_boundary += pc.length == longest_kept;
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    const bool kept = std::any_of(capped.begin(), capped.end(), [&](const PathContext& c) {
      return c.start_terminal == boundary[i]->start_terminal && c.end_terminal == boundary[i]->end_terminal;
    });
    CHECK(kept == (i < kept_boundary));
  }

  const auto tiny = extract_path_contexts(tree, {8, 2, 1});
  REQUIRE(tiny.size() == 1);
}

TEST_CASE("hand-built trees match the brute-force enumerator") {
  for (const char* spec : testsupport::kHandTrees) {
    CAPTURE(spec);
    const SyntaxTree tree = build_tree(spec);
    CHECK(tree.terminals().size() <= 12);
    check_against_oracle(tree, {});
    check_against_oracle(tree, {3, 1, 200});
    check_against_oracle(tree, {20, 20, 200});
  }
}

TEST_CASE("random trees match the brute-force enumerator") {
  std::mt19937_64 rng(20240611);
  for (int round = 0; round < 200; ++round) {
    const int terminals = 1 + static_cast<int>(rng() % 12);
    const std::string spec = testsupport::random_tree_spec(rng, terminals);
    CAPTURE(spec);
    const SyntaxTree tree = build_tree(spec);
    check_against_oracle(tree, {1 + static_cast<int>(rng() % 10), 1 + static_cast<int>(rng() % 3), 200});
  }
}

TEST_CASE("extraction is deterministic") {
  const SyntaxTree tree = testsupport::parse_fixture("listing1.java");
  CHECK(strings_of(tree, extract_path_contexts(tree, {})) == strings_of(tree, extract_path_contexts(tree, {})));
}

TEST_CASE("limits below one are rejected") {
  const SyntaxTree tree = build_tree("(BlockStmt NameExpr:a NameExpr:b)");
  for (const ExtractionLimits bad : {ExtractionLimits{0, 2, 200}, ExtractionLimits{8, 0, 200}, ExtractionLimits{8, 2, 0}}) {
    try {
      extract_path_contexts(tree, bad);
      FAIL("expected a config error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Config);
    }
  }
}
