#include "codeattn/attention.hpp"

#include <charconv>
#include <cmath>
#include <unordered_map>

#include "codeattn/error.hpp"
#include "codeattn/io.hpp"
#include "text_util.hpp"

namespace codeattn {

namespace {

// Neumaier-compensated running sums, one per node, so the node totals do not
// depend on the order in which contexts are accumulated.
class CompensatedSums {
 public:
  explicit CompensatedSums(std::size_t n) : sum_(n, 0.0), comp_(n, 0.0) {}

  void add(std::size_t i, double x) {
    const double t = sum_[i] + x;
    if (std::abs(sum_[i]) >= std::abs(x)) {
      comp_[i] += (sum_[i] - t) + x;
    } else {
      comp_[i] += (x - t) + sum_[i];
    }
    sum_[i] = t;
  }

  std::vector<double> totals() const {
    std::vector<double> out(sum_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = sum_[i] + comp_[i];
    return out;
  }

 private:
  std::vector<double> sum_;
  std::vector<double> comp_;
};

}  // namespace

std::vector<PathAttention> parse_attention(std::string_view text, std::string_view source_name) {
  std::vector<PathAttention> records;
  std::unordered_map<std::string, std::size_t> position;
  int line_no = 0;
  for (std::string_view line : text::split_lines(text)) {
    ++line_no;
    line = text::strip_cr(line);
    if (text::trim(line).empty() || line.front() == '#') continue;
    const std::size_t tab = line.rfind('\t');
    if (tab == std::string_view::npos || tab == 0) {
      throw FormatError(std::string(source_name), line_no, "expected <canonical_string><TAB><value>");
    }
    const std::string_view key = line.substr(0, tab);
    const auto value = text::parse_double(text::trim(line.substr(tab + 1)));
    if (!value) {
      throw FormatError(std::string(source_name), line_no,
                        "malformed attention value '" + std::string(line.substr(tab + 1)) + "'");
    }
    if (!std::isfinite(*value) || *value < 0.0) {
      throw Error(ErrorKind::Value, std::string(source_name) + ":" + std::to_string(line_no) +
                                        ": attention must be finite and non-negative");
    }
    const double v = *value == 0.0 ? 0.0 : *value;
    auto [it, inserted] = position.try_emplace(std::string(key), records.size());
    if (inserted) {
      records.push_back({std::string(key), v});
    } else {
      records[it->second].value = v;
    }
  }
  return records;
}

std::vector<PathAttention> load_attention(const std::filesystem::path& file) {
  return parse_attention(read_text_file(file), file.string());
}

std::vector<PathAttention> uniform_attention(const SyntaxTree& tree,
                                             std::span<const PathContext> contexts) {
  if (contexts.empty()) throw Error(ErrorKind::EmptyInput, "uniform attention needs at least one context");
  const double weight = 1.0 / static_cast<double>(contexts.size());
  std::vector<PathAttention> out;
  out.reserve(contexts.size());
  for (const auto& pc : contexts) out.push_back({canonical_string(tree, pc), weight});
  return out;
}

double NodeAttention::total_mass() const {
  CompensatedSums sum(1);
  for (double v : values) sum.add(0, v);
  return sum.totals()[0];
}

NodeAttention aggregate_node_attention(const SyntaxTree& tree, std::span<const PathContext> contexts,
                                       std::span<const PathAttention> attentions) {
  std::unordered_map<std::string, double> lookup;
  for (const auto& rec : attentions) lookup[rec.key] = rec.value;

  NodeAttention out;
  CompensatedSums sums(tree.size());
  CompensatedSums expected(1);
  for (const auto& pc : contexts) {
    const auto it = lookup.find(canonical_string(tree, pc));
    if (it == lookup.end()) {
      ++out.unmatched_contexts;
      continue;
    }
    ++out.matched_contexts;
    const double a = it->second;
    expected.add(0, a * static_cast<double>(pc.node_path.size()));
    for (NodeId n : pc.node_path) sums.add(static_cast<std::size_t>(n), a);
  }
  out.values = sums.totals();
  out.expected_mass = expected.totals()[0];
  return out;
}

}  // namespace codeattn
