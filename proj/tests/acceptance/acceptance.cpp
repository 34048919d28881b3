// Prints one PASS/FAIL line per acceptance criterion; exits non-zero if any fail.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aggregation_oracle.hpp"
#include "codeattn/error.hpp"
#include "codeattn/io.hpp"
#include "codeattn/pipeline.hpp"
#include "fixtures.hpp"
#include "hand_trees.hpp"
#include "path_oracle.hpp"
#include "roc_oracle.hpp"
#include "tree_builder.hpp"

using namespace codeattn;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

ScalarField grid_of(int w, int h, std::vector<double> values) {
  ScalarField f(w, h);
  f.values = std::move(values);
  return f;
}

GazeHistogram hist_of(int w, int h, std::vector<std::uint32_t> counts) {
  GazeHistogram g;
  g.counts = Grid<std::uint32_t>(w, h);
  g.counts.values = std::move(counts);
  return g;
}

Outcome path_oracle_equivalence() {
  Outcome out;
  const auto t0 = Clock::now();
  for (std::size_t i = 0; i < testsupport::kHandTrees.size(); ++i) {
    const SyntaxTree tree = testsupport::build_tree(testsupport::kHandTrees[i]);
    const auto got = enumerate_path_contexts(tree, {});
    const auto expected = oracle::all_paths(tree, 8, 2);
    const std::string which = "tree " + std::to_string(i + 1);
    out.require(tree.terminals().size() <= 12, which + " has more than 12 terminals");
    out.require(got.size() == expected.size(), which + ": context count differs");
    for (std::size_t k = 0; k < std::min(got.size(), expected.size()); ++k) {
      out.require(got[k].node_path == expected[k].nodes, which + ": node path differs");
      out.require(canonical_string(tree, got[k]) == expected[k].text, which + ": canonical string differs");
    }
  }
  const double elapsed = seconds_since(t0);
  out.require(elapsed < 1.0, "took " + std::to_string(elapsed) + " s");
  if (out.ok) out.detail = "10 trees, " + std::to_string(elapsed * 1000.0) + " ms";
  return out;
}

Outcome aggregation_oracle() {
  Outcome out;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int round = 0; round < 50; ++round) {
    const SyntaxTree tree =
        testsupport::build_tree(testsupport::random_tree_spec(rng, 2 + static_cast<int>(rng() % 11)));
    const auto contexts = extract_path_contexts(tree, {});
    std::vector<PathAttention> records;
    std::vector<std::pair<std::string, double>> plain;
    for (const auto& pc : contexts) {
      records.push_back({canonical_string(tree, pc), unit(rng)});
      plain.emplace_back(records.back().key, records.back().value);
    }
    const NodeAttention got = aggregate_node_attention(tree, contexts, records);
    const auto expected = oracle::node_sums(tree, oracle::all_paths(tree, 8, 2), plain);
    for (std::size_t i = 0; i < expected.size(); ++i) worst = std::max(worst, std::abs(got.values[i] - expected[i]));
    long double path_mass = 0.0L;
    std::map<std::string, double> last;
    for (const auto& r : records) last[r.key] = r.value;
    for (const auto& pc : contexts) path_mass += last[canonical_string(tree, pc)] * pc.node_path.size();
    out.require(close_rel(got.total_mass(), static_cast<double>(path_mass), 1e-9), "mass not conserved");
  }
  out.require(worst <= 1e-12, "max deviation " + std::to_string(worst));
  if (out.ok) {
    std::ostringstream s;
    s << "50 instances, max |diff| " << worst;
    out.detail = s.str();
  }
  return out;
}

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

Outcome gaussian_contract() {
  Outcome out;
  {
    const SyntaxTree tree = testsupport::build_tree("(BlockStmt NameExpr:ab)");
    LayoutConfig cfg = small_layout();
    cfg.margin_x = 0.5;
    cfg.margin_y = 0.5;
    const auto geom = layout_tokens(tree, cfg);
    NodeAttention att;
    att.values.assign(tree.size(), 0.0);
    att.values[static_cast<std::size_t>(geom[0].token.owner)] = 0.7;
    const ScalarField field = generate_attention_map(geom, att, cfg);
    out.require(close_rel(field_max(field), 0.7, 1e-6), "isolated peak differs from its attention");
  }
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int round = 0; round < 20; ++round) {
    const SyntaxTree tree =
        testsupport::build_tree(testsupport::random_tree_spec(rng, 3 + static_cast<int>(rng() % 8)));
    const LayoutConfig cfg = small_layout();
    const auto geom = layout_tokens(tree, cfg);
    NodeAttention all;
    all.values.assign(tree.size(), 0.0);
    NodeAttention left = all, right = all;
    for (const auto& g : geom) {
      const double a = unit(rng);
      all.values[static_cast<std::size_t>(g.token.owner)] = a;
      (unit(rng) < 0.5 ? left : right).values[static_cast<std::size_t>(g.token.owner)] = a;
    }
    NodeAttention scaled = all;
    for (double& v : scaled.values) v *= 2.5;
    const ScalarField whole = generate_attention_map(geom, all, cfg, 2);
    const ScalarField a = generate_attention_map(geom, left, cfg, 2);
    const ScalarField b = generate_attention_map(geom, right, cfg, 2);
    const ScalarField s = generate_attention_map(geom, scaled, cfg, 2);
    for (std::size_t i = 0; i < whole.size(); ++i) {
      out.require(close_rel(whole.values[i], a.values[i] + b.values[i], 1e-9), "superposition fails");
      out.require(close_rel(s.values[i], 2.5 * whole.values[i], 1e-9), "scaling fails");
    }
  }
  if (out.ok) out.detail = "peak within 1e-6; 20 layouts";
  return out;
}

Outcome rates_example() {
  Outcome out;
  const GazeHistogram g = hist_of(2, 2, {1, 0, 0, 2});
  const BinaryField gminus = negate_histogram(g);
  const ScalarField m = grid_of(2, 2, {0.9, 0.8, 0.1, 0.2});
  const Rates r = tpr_fpr(g, gminus, binarize(m, 0.5));
  out.require(r.tpr == 1.0 / 3.0 && r.fpr == 1.0 / 2.0, "2x2 example is not (1/3, 1/2)");
  const Rates lo = tpr_fpr(g, gminus, binarize(m, 0.0));
  const Rates hi = tpr_fpr(g, gminus, binarize(m, 1.0));
  out.require(lo.tpr == 1.0 && lo.fpr == 1.0, "threshold below the field is not (1,1)");
  out.require(hi.tpr == 0.0 && hi.fpr == 0.0, "threshold above the field is not (0,0)");
  if (out.ok) out.detail = "tpr 1/3, fpr 1/2; endpoints (0,0) and (1,1)";
  return out;
}

Outcome auc_correctness() {
  Outcome out;
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int round = 0; round < 100; ++round) {
    const int w = 1 + static_cast<int>(rng() % 8), h = 2 + static_cast<int>(rng() % 7);
    const std::size_t n = static_cast<std::size_t>(w * h);
    std::vector<double> values(n);
    std::vector<std::uint32_t> counts(n);
    for (auto& v : values) v = round % 3 == 0 ? static_cast<double>(rng() % 5) : unit(rng);
    for (auto& c : counts) c = unit(rng) < 0.35 ? 1u + static_cast<std::uint32_t>(rng() % 4) : 0u;
    counts[0] = 1;
    counts[1] = 0;
    const double a = auc(roc_curve(grid_of(w, h, values), hist_of(w, h, counts)).points);
    worst = std::max(worst, std::abs(a - oracle::rank_auc(values, counts)));
  }
  out.require(worst <= 1e-9, "trapezoid and rank AUC differ by " + std::to_string(worst));
  const GazeHistogram g = hist_of(4, 1, {0, 3, 1, 0});
  out.require(auc(roc_curve(grid_of(4, 1, {0.4, 0.4, 0.4, 0.4}), g).points) == 0.5, "constant field AUC != 0.5");
  out.require(auc(roc_curve(grid_of(4, 1, {0.1, 0.9, 0.7, 0.2}), g).points) == 1.0, "separating field AUC != 1");
  if (out.ok) {
    std::ostringstream s;
    s << "100 grids, max |trapezoid - rank| " << worst;
    out.detail = s.str();
  }
  return out;
}

// Screen-space gaze CSV with samples drawn cell-wise from `weights` over the
// clip square, jittered uniformly inside each cell.
std::string sample_gaze(const std::vector<double>& weights, int cells, int cell_px, const ClipRect& clip,
                        std::mt19937_64& rng, int n) {
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::uniform_real_distribution<double> jitter(0.0, static_cast<double>(cell_px));
  std::string csv = "timestamp,x,y\n";
  for (int i = 0; i < n; ++i) {
    const std::size_t c = pick(rng);
    const double x = clip.x0 + static_cast<double>(c % static_cast<std::size_t>(cells)) * cell_px + jitter(rng);
    const double y = clip.y0 + static_cast<double>(c / static_cast<std::size_t>(cells)) * cell_px + jitter(rng);
    csv += std::to_string(i / 120.0) + "," + std::to_string(x) + "," + std::to_string(y) + "\n";
  }
  return csv;
}

Outcome end_to_end() {
  Outcome out;
  const auto t0 = Clock::now();
  const RunConfig cfg = load_run_config(testsupport::fixture("run_config.json"));
  const MapRun run = run_map_file(testsupport::fixture("listing1.java"), cfg);
  const int cells = run.field.width;
  const double peak = field_max(run.field);
  std::mt19937_64 rng(20240611);

  const auto score = [&](const std::vector<double>& weights) {
    const std::string csv = sample_gaze(weights, cells, cfg.downsample, cfg.layout.clip, rng, 5000);
    const GazeLoad gaze = parse_gaze(csv, cfg.layout, std::nullopt, "synthetic");
    return run_eval(run.field, gaze, cfg, "listing1").auc;
  };
  std::vector<double> inverse = run.field.values;
  for (double& v : inverse) v = peak - v;
  const double proportional = score(run.field.values);
  const double uniform = score(std::vector<double>(run.field.size(), 1.0));
  const double opposed = score(inverse);
  const double elapsed = seconds_since(t0);

  out.require(run.attention.unmatched_contexts == 0, "fixture attention leaves contexts unmatched");
  out.require(proportional > 0.9, "map-proportional AUC " + std::to_string(proportional));
  out.require(uniform >= 0.45 && uniform <= 0.55, "uniform AUC " + std::to_string(uniform));
  out.require(opposed < 0.5, "inverted AUC " + std::to_string(opposed));
  out.require(elapsed < 30.0, "took " + std::to_string(elapsed) + " s");
  std::ostringstream s;
  s.precision(4);
  s << "AUC proportional " << proportional << ", uniform " << uniform << ", inverted " << opposed << "; "
    << elapsed << " s";
  if (out.ok) out.detail = s.str();
  else out.detail += " (" + s.str() + ")";
  return out;
}

Outcome monotone_invariance() {
  Outcome out;
  std::mt19937_64 rng(777);
  std::vector<double> values(64);
  std::vector<std::uint32_t> counts(64);
  // distinct values on a coarse lattice so x^3 cannot merge neighbours
  std::vector<int> ranks(64);
  for (int i = 0; i < 64; ++i) ranks[static_cast<std::size_t>(i)] = i + 1;
  std::shuffle(ranks.begin(), ranks.end(), rng);
  for (std::size_t i = 0; i < 64; ++i) values[i] = ranks[i] / 64.0;
  for (auto& c : counts) c = rng() % 3 == 0 ? 1u + static_cast<std::uint32_t>(rng() % 5) : 0u;
  counts[0] = 2;
  counts[1] = 0;
  const GazeHistogram g = hist_of(8, 8, counts);
  const RocCurve base = roc_curve(grid_of(8, 8, values), g);
  const double base_auc = auc(base.points);
  const std::pair<const char*, std::function<double(double)>> transforms[] = {
      {"x^3", [](double x) { return x * x * x; }}, {"2x+1", [](double x) { return 2 * x + 1; }}};
  for (const auto& [name, f] : transforms) {
    std::vector<double> moved(values.size());
    std::transform(values.begin(), values.end(), moved.begin(), f);
    const RocCurve c = roc_curve(grid_of(8, 8, moved), g);
    out.require(c.points.size() == base.points.size(), std::string(name) + " changes the point count");
    for (std::size_t i = 0; i < std::min(c.points.size(), base.points.size()); ++i) {
      out.require(std::abs(c.points[i].fpr - base.points[i].fpr) <= 1e-12 &&
                      std::abs(c.points[i].tpr - base.points[i].tpr) <= 1e-12,
                  std::string(name) + " moves a ROC point");
    }
    out.require(std::abs(auc(c.points) - base_auc) <= 1e-12, std::string(name) + " changes the AUC");
  }
  if (out.ok) out.detail = std::to_string(base.points.size()) + " points unchanged under x^3 and 2x+1";
  return out;
}

Outcome corpus_rules() {
  Outcome out;
  std::mt19937_64 rng(8);
  const std::string alphabet = "\t\t \nxy;{}";
  for (int i = 0; i < 1000; ++i) {
    std::string s;
    for (std::size_t j = 0, len = rng() % 50; j < len; ++j) s += alphabet[rng() % alphabet.size()];
    const std::string once = normalize_indent(s);
    out.require(normalize_indent(once) == once, "normalize_indent is not idempotent");
  }
  const int loc = compute_stats(testsupport::parse_fixture("listing1.java").snippet()).loc;
  out.require(loc == 21, "listing1 LOC is " + std::to_string(loc));

  std::vector<SnippetStats> corpus;
  for (int label = 0; label < 11; ++label) {
    for (int i = 0; i < 15; ++i) {
      SnippetStats s;
      s.label = label == 0 ? "linear_search" : "algorithm_" + std::to_string(label);
      s.id = s.label + "_" + std::to_string(i);
      s.loc = 8 + static_cast<int>(rng() % 40);
      s.cpl_mean = 10.0 + static_cast<double>(rng() % 300) / 10.0;
      corpus.push_back(std::move(s));
    }
  }
  SelectionConfig sel;
  sel.per_label["linear_search"] = 12;
  const auto picked = select_snippets(corpus, sel);
  const auto n = std::count_if(picked.begin(), picked.end(), [](const SnippetStats& s) { return s.selected; });
  out.require(n == 72, "selected " + std::to_string(n));
  if (out.ok) out.detail = "1000 strings idempotent; LOC 21; 72 selected";
  return out;
}

int run_cli_map(const fs::path& out_dir) {
  const std::string cmd = std::string("\"") + CODEATTN_CLI_PATH + "\" --config \"" +
                          testsupport::fixture("run_config.json").string() + "\" --out \"" + out_dir.string() +
                          "\" map \"" + testsupport::fixture("listing1.java").string() + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism() {
  Outcome out;
  const fs::path root = fs::temp_directory_path() / "codeattn_acceptance_determinism";
  fs::remove_all(root);
  out.require(run_cli_map(root / "a") == 0, "first map run failed");
  out.require(run_cli_map(root / "b") == 0, "second map run failed");
  if (out.ok) {
    for (const char* name : {"listing1.csv", "listing1.pgm"}) {
      out.require(read_text_file(root / "a" / name) == read_text_file(root / "b" / name),
                  std::string(name) + " differs between runs");
    }
  }
  if (out.ok) out.detail = "CSV and PGM byte-identical";
  fs::remove_all(root);
  return out;
}

}  // namespace

int main() {
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"path contexts match the brute-force enumerator", path_oracle_equivalence},
      {"node attention matches brute-force accumulation", aggregation_oracle},
      {"Gaussian peak, superposition and scaling", gaussian_contract},
      {"tpr/fpr hand example and binarize endpoints", rates_example},
      {"trapezoid AUC equals the rank statistic", auc_correctness},
      {"synthetic end-to-end gaze agreement", end_to_end},
      {"ROC invariance under monotone transforms", monotone_invariance},
      {"corpus normalization, LOC and selection", corpus_rules},
      {"map outputs are byte-identical across runs", determinism},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome result;
    try {
      result = check();
    } catch (const std::exception& e) {
      result.ok = false;
      result.detail = std::string("threw: ") + e.what();
    }
    if (!result.ok) ++failed;
    std::printf("%s %d %s: %s\n", result.ok ? "PASS" : "FAIL", index, name, result.detail.c_str());
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
