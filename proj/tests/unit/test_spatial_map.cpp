#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "codeattn/error.hpp"
#include "codeattn/spatial_map.hpp"
#include "fixtures.hpp"
#include "gaussian_oracle.hpp"
#include "tree_builder.hpp"

using namespace codeattn;
using testsupport::build_tree;

namespace {

LayoutConfig small_layout() {
  LayoutConfig cfg;
  cfg.cell_w = 10;
  cfg.cell_h = 20;
  cfg.margin_x = 0;
  cfg.margin_y = 0;
  cfg.stimulus_w = 200;
  cfg.stimulus_h = 200;
  cfg.clip = {0, 0, 200};
  return cfg;
}

NodeAttention attention_for(const SyntaxTree& tree, std::initializer_list<std::pair<NodeId, double>> values) {
  NodeAttention att;
  att.values.assign(tree.size(), 0.0);
  for (const auto& [id, v] : values) att.values[static_cast<std::size_t>(id)] = v;
  return att;
}

std::size_t utf8_chars(const std::string& s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

bool close_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace

TEST_CASE("token geometry follows the layout formulas") {
  const SyntaxTree tree = build_tree("(BlockStmt NameExpr:abc IfStmt!if)");
  const auto geom = layout_tokens(tree, small_layout());
  REQUIRE(geom.size() == 2);
  CHECK(geom[1].token.text == "if");
  CHECK(geom[1].center_x == 50.0);
  CHECK(geom[1].center_y == 10.0);
  CHECK(geom[1].sigma_x == 5.0);
  CHECK(geom[1].sigma_y == 5.0);

  const SyntaxTree one = build_tree("(BlockStmt NameExpr:x)");
  const auto g1 = layout_tokens(one, small_layout());
  REQUIRE(g1.size() == 1);
  CHECK(g1[0].center_x == 5.0);
  CHECK(g1[0].center_y == 10.0);
  CHECK(g1[0].width_px == 10.0);
  CHECK(g1[0].height_px == 20.0);
  CHECK(g1[0].sigma_x == 2.5);
}

TEST_CASE("listing1 geometry matches a recomputation from raw numbers") {
  const SyntaxTree tree = testsupport::parse_fixture("listing1.java");
  const LayoutConfig cfg = load_layout_config(testsupport::fixture("layout.json"));
  const auto geom = layout_tokens(tree, cfg);
  REQUIRE(geom.size() == tree.tokens().size());
  for (const auto& g : geom) {
    const auto b = oracle::blob(g.token.span.start_line, g.token.span.start_col,
                                static_cast<int>(utf8_chars(g.token.text)), 16, 36, 580, 160, 540, 120, 4, 1.0);
    CHECK(g.center_x == doctest::Approx(b.cx).epsilon(1e-12));
    CHECK(g.center_y == doctest::Approx(b.cy).epsilon(1e-12));
    CHECK(g.sigma_x == doctest::Approx(b.sx).epsilon(1e-12));
    CHECK(g.sigma_y == doctest::Approx(b.sy).epsilon(1e-12));
    CHECK(g.width_px == utf8_chars(g.token.text) * 16.0);
  }
  // `if` at 0-based (10, 6): centre (580 + (6 + 1) * 16 - 540, 160 + 10.5 * 36 - 120)
  const auto it = std::find_if(geom.begin(), geom.end(), [](const TokenGeometry& g) { return g.token.text == "if"; });
  REQUIRE(it != geom.end());
  CHECK(it->center_x == 152.0);
  CHECK(it->center_y == 418.0);
}

TEST_CASE("an isolated token peaks at its attention value") {
  const SyntaxTree tree = build_tree("(BlockStmt IfStmt!if)");
  LayoutConfig cfg = small_layout();
  cfg.margin_x = 0.5;
  cfg.margin_y = 0.5;  // puts the 2-char token's centre on pixel (10, 10) + 0.5
  const auto geom = layout_tokens(tree, cfg);
  const auto att = attention_for(tree, {{1, 1.33}});
  CHECK(attention_at(geom, att, geom[0].center_x, geom[0].center_y) == 1.33);
  const ScalarField field = generate_attention_map(geom, att, cfg);
  CHECK(field(10, 10) == 1.33);
  CHECK(field_max(field) == 1.33);
}

TEST_CASE("zero attention gives an all-zero field") {
  const SyntaxTree tree = testsupport::parse_fixture("listing1.java");
  const LayoutConfig cfg;
  const ScalarField field = generate_attention_map(layout_tokens(tree, cfg), attention_for(tree, {}), cfg, 4);
  CHECK(field.width == 210);
  CHECK(field.height == 210);
  for (double v : field.values) CHECK(v == 0.0);
}

TEST_CASE("two tokens match the closed-form sum at probe pixels") {
  const SyntaxTree tree = build_tree("(BlockStmt NameExpr:ab NameExpr:cdef)");
  const LayoutConfig cfg = small_layout();
  const auto geom = layout_tokens(tree, cfg);
  const auto att = attention_for(tree, {{1, 0.3}, {2, 0.5}});
  const ScalarField field = generate_attention_map(geom, att, cfg);
  const std::vector<oracle::Blob> blobs = {oracle::blob(0, 0, 2, 10, 20, 0, 0, 0, 0, 4, 0.3),
                                           oracle::blob(0, 3, 4, 10, 20, 0, 0, 0, 0, 4, 0.5)};
  for (const auto& [x, y] : std::vector<std::pair<int, int>>{{0, 0}, {10, 10}, {25, 9}, {50, 10}, {33, 30}}) {
    CAPTURE(x);
    CAPTURE(y);
    const double expected = oracle::mixture(blobs, x + 0.5, y + 0.5);
    CHECK(close_rel(field(x, y), expected, 1e-12));
  }
}

TEST_CASE("downsampled cells sample at their centres") {
  const SyntaxTree tree = build_tree("(BlockStmt NameExpr:ab NameExpr:cdef)");
  const LayoutConfig cfg = small_layout();
  const auto geom = layout_tokens(tree, cfg);
  const auto att = attention_for(tree, {{1, 0.3}, {2, 0.5}});
  const ScalarField coarse = generate_attention_map(geom, att, cfg, 8);
  CHECK(coarse.width == 25);
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 25; ++x) CHECK(close_rel(coarse(x, y), attention_at(geom, att, x * 8 + 4, y * 8 + 4), 1e-15));
  }
  try {
    generate_attention_map(geom, att, cfg, 7);
    FAIL("expected BadDownsample");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadDownsample);
  }
  CHECK_THROWS_AS(generate_attention_map(geom, att, cfg, 0), Error);
}

TEST_CASE("superposition, scaling and non-negativity on random layouts") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int round = 0; round < 20; ++round) {
    const SyntaxTree tree = build_tree(testsupport::random_tree_spec(rng, 3 + static_cast<int>(rng() % 8)));
    const LayoutConfig cfg = small_layout();
    const auto geom = layout_tokens(tree, cfg);
    NodeAttention all = attention_for(tree, {});
    NodeAttention left = all, right = all;
    for (const auto& g : geom) {
      const double a = unit(rng);
      all.values[static_cast<std::size_t>(g.token.owner)] = a;
      (unit(rng) < 0.5 ? left : right).values[static_cast<std::size_t>(g.token.owner)] = a;
    }
    const ScalarField whole = generate_attention_map(geom, all, cfg, 2);
    const ScalarField a = generate_attention_map(geom, left, cfg, 2);
    const ScalarField b = generate_attention_map(geom, right, cfg, 2);
    NodeAttention scaled = all;
    for (double& v : scaled.values) v *= 3.75;
    const ScalarField s = generate_attention_map(geom, scaled, cfg, 2);
    for (std::size_t i = 0; i < whole.size(); ++i) {
      CHECK(whole.values[i] >= 0.0);
      CHECK(std::isfinite(whole.values[i]));
      CHECK(close_rel(whole.values[i], a.values[i] + b.values[i], 1e-9));
      CHECK(close_rel(s.values[i], 3.75 * whole.values[i], 1e-9));
    }
  }
}

TEST_CASE("tokens beyond the stimulus overflow the layout") {
  const SyntaxTree tree = build_tree("(BlockStmt NameExpr:abcdefghijklmnopqrstuvwxyz)");
  LayoutConfig cfg = small_layout();
  try {
    layout_tokens(tree, cfg);
    FAIL("expected LayoutOverflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LayoutOverflow);
  }
  cfg.margin_x = -1;
  CHECK_THROWS_AS(layout_tokens(build_tree("(BlockStmt NameExpr:a)"), cfg), Error);
}

TEST_CASE("PGM pixels are floor(255 v / max)") {
  ScalarField field(2, 2);
  field(0, 0) = 0.0;
  field(1, 0) = 1.0;
  field(0, 1) = 0.5;
  field(1, 1) = 0.25;
  CHECK(normalized_pixels(field) == std::vector<std::uint8_t>{0, 255, 127, 63});
  const std::string pgm = field_to_pgm(field);
  CHECK(pgm == std::string("P5\n2 2\n255\n") + std::string("\x00\xff\x7f\x3f", 4));
  CHECK(normalized_pixels(ScalarField(3, 2, 0.0)) == std::vector<std::uint8_t>(6, 0));
}

TEST_CASE("CSV grids round-trip") {
  ScalarField field(3, 2);
  field.values = {0.0, 1e-300, 0.1, 1.0 / 3.0, 2.5e10, 7.0};
  const std::string csv = field_to_csv(field);
  CHECK(csv.rfind("3,2\n", 0) == 0);
  CHECK(field_from_csv(csv) == field);

  const SyntaxTree tree = testsupport::parse_fixture("listing1.java");
  const LayoutConfig cfg;
  const auto contexts = extract_path_contexts(tree, {});
  const auto att = aggregate_node_attention(tree, contexts, load_attention(testsupport::fixture("listing1.attention.tsv")));
  const ScalarField map = generate_attention_map(layout_tokens(tree, cfg), att, cfg, 4);
  const auto dir = std::filesystem::temp_directory_path() / "codeattn_csv_roundtrip";
  render_field(map, dir / "listing1");
  const ScalarField back = read_field_csv(dir / "listing1.csv");
  REQUIRE(back.same_shape(map));
  for (std::size_t i = 0; i < map.size(); ++i) CHECK(std::abs(back.values[i] - map.values[i]) <= 1e-6);
  CHECK(back == map);
  CHECK(std::filesystem::file_size(dir / "listing1.pgm") == std::string("P5\n210 210\n255\n").size() + 210 * 210);
  std::filesystem::remove_all(dir);
}

TEST_CASE("malformed CSV grids are rejected with a line number") {
  const std::pair<const char*, int> cases[] = {
      {"2\n0,0\n", 1}, {"2,1\n0,0,0\n", 2}, {"2,2\n0,0\n", 2}, {"1,1\n-1\n", 2}, {"1,1\nx\n", 2}, {"1,1\n1\n2\n", 3},
  };
  for (const auto& [text, line] : cases) {
    CAPTURE(text);
    try {
      field_from_csv(text, "map.csv");
      FAIL("expected a format error");
    } catch (const FormatError& e) {
      CHECK(e.line() == line);
    }
  }
}

TEST_CASE("layout config JSON") {
  const LayoutConfig cfg = load_layout_config(testsupport::fixture("layout.json"));
  CHECK(cfg.cell_w == 16);
  CHECK(cfg.clip.side == 840);
  CHECK(parse_layout_config(to_json_text(cfg)).margin_y == 160);
  CHECK(parse_layout_config("{}").clip.x0 == 540);

  for (const char* bad : {"{\"cell_w\": 0}", "{\"cell_w\": \"wide\"}", "{\"colour\": 1}", "[1]", "{",
                          "{\"clip\": {\"x0\": 1500, \"y0\": 0, \"side\": 840}}", "{\"clip\": {\"w\": 1}}",
                          "{\"sigma_divisor\": -1}"}) {
    CAPTURE(bad);
    try {
      parse_layout_config(bad);
      FAIL("expected a config error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Config);
    }
  }
}

TEST_CASE("untokened mass collects attention on structural nodes") {
  const SyntaxTree tree = build_tree("(BlockStmt (Plus NameExpr:a NameExpr:b))");
  const auto att = attention_for(tree, {{0, 0.5}, {1, 0.25}, {2, 1.0}});
  CHECK(untokened_mass(tree, att) == 0.75);
}
