#include "codeattn/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <tuple>

#include "codeattn/error.hpp"
#include "codeattn/io.hpp"
#include "codeattn/syntax.hpp"
#include "text_util.hpp"
#include "utf8.hpp"

namespace codeattn {

std::string normalize_indent(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '\t') {
      out += "  ";
    } else {
      out += c;
    }
  }
  return out;
}

CplStatistic parse_cpl_statistic(std::string_view name) {
  if (name == "mean") return CplStatistic::Mean;
  if (name == "median") return CplStatistic::Median;
  if (name == "max") return CplStatistic::Max;
  throw Error(ErrorKind::Config, "CPL statistic must be mean, median or max, got '" + std::string(name) + "'");
}

const char* to_string(CplStatistic stat) {
  switch (stat) {
    case CplStatistic::Median: return "median";
    case CplStatistic::Max: return "max";
    default: return "mean";
  }
}

SnippetStats compute_stats(const SourceSnippet& snippet, std::string label, CplStatistic stat) {
  SnippetStats stats;
  stats.id = snippet.id;
  stats.label = std::move(label);
  std::string_view body = snippet.text;
  if (!body.empty() && body.back() == '\n') body.remove_suffix(1);
  std::vector<std::size_t> widths;
  for (std::size_t pos = 0;;) {
    const std::size_t nl = body.find('\n', pos);
    const auto line = text::strip_cr(body.substr(pos, nl == std::string_view::npos ? body.npos : nl - pos));
    widths.push_back(utf8::count_code_points(line));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  stats.loc = static_cast<int>(widths.size());
  switch (stat) {
    case CplStatistic::Mean: {
      std::size_t chars = 0;
      for (std::size_t w : widths) chars += w;
      stats.cpl_mean = static_cast<double>(chars) / static_cast<double>(widths.size());
      break;
    }
    case CplStatistic::Median: {
      std::sort(widths.begin(), widths.end());
      const std::size_t mid = widths.size() / 2;
      stats.cpl_mean = widths.size() % 2 == 1 ? static_cast<double>(widths[mid])
                                              : (static_cast<double>(widths[mid - 1]) + static_cast<double>(widths[mid])) / 2.0;
      break;
    }
    case CplStatistic::Max:
      stats.cpl_mean = static_cast<double>(*std::max_element(widths.begin(), widths.end()));
      break;
  }
  return stats;
}

int SelectionConfig::k_for(std::string_view label) const {
  const auto it = per_label.find(label);
  return it == per_label.end() ? default_k : it->second;
}

std::vector<SnippetStats> select_snippets(std::vector<SnippetStats> stats, const SelectionConfig& config) {
  if (stats.empty()) throw Error(ErrorKind::EmptyInput, "corpus is empty");
  const auto n = static_cast<double>(stats.size());
  const auto spread = [&](auto value) {
    double mean = 0.0;
    for (const auto& s : stats) mean += value(s);
    mean /= n;
    double var = 0.0;
    for (const auto& s : stats) var += (value(s) - mean) * (value(s) - mean);
    return std::pair{mean, std::sqrt(var / n)};
  };
  const auto loc = [](const SnippetStats& s) { return static_cast<double>(s.loc); };
  const auto cpl = [](const SnippetStats& s) { return s.cpl_mean; };
  const auto [loc_mean, loc_sd] = spread(loc);
  const auto [cpl_mean, cpl_sd] = spread(cpl);
  for (auto& s : stats) {
    const double zl = loc_sd == 0.0 ? 0.0 : (loc(s) - loc_mean) / loc_sd;
    const double zc = cpl_sd == 0.0 ? 0.0 : (cpl(s) - cpl_mean) / cpl_sd;
    s.deviation = std::sqrt(zl * zl + zc * zc);
    s.selected = false;
  }
  std::sort(stats.begin(), stats.end(), [](const SnippetStats& a, const SnippetStats& b) {
    return std::tie(a.label, a.deviation, a.id) < std::tie(b.label, b.deviation, b.id);
  });
  for (std::size_t i = 0; i < stats.size();) {
    std::size_t j = i;
    while (j < stats.size() && stats[j].label == stats[i].label) ++j;
    const int k = config.k_for(stats[i].label);
    if (k < 0 || static_cast<std::size_t>(k) > j - i) {
      throw Error(ErrorKind::InsufficientSnippets,
                  "label '" + stats[i].label + "' has " + std::to_string(j - i) + " snippets, " +
                      std::to_string(k) + " requested");
    }
    for (std::size_t m = i; m < i + static_cast<std::size_t>(k); ++m) stats[m].selected = true;
    i = j;
  }
  for (const auto& [label, k] : config.per_label) {
    const bool present = std::any_of(stats.begin(), stats.end(), [&](const SnippetStats& s) { return s.label == label; });
    if (!present && k > 0) {
      throw Error(ErrorKind::InsufficientSnippets, "label '" + label + "' has no snippets");
    }
  }
  return stats;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& file) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(read_text_file(file));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Format, file.string() + ": invalid JSON: " + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorKind::Format, file.string() + ": manifest must be a JSON array");
  std::vector<ManifestEntry> out;
  const auto base = file.parent_path();
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& e = doc[i];
    if (!e.is_object() || !e.contains("id") || !e.contains("path") || !e["id"].is_string() ||
        !e["path"].is_string()) {
      throw Error(ErrorKind::Format, file.string() + ": entry " + std::to_string(i) + " needs string 'id' and 'path'");
    }
    ManifestEntry entry;
    entry.id = e["id"].get<std::string>();
    entry.path = e["path"].get<std::string>();
    if (entry.path.is_relative()) entry.path = base / entry.path;
    if (const auto it = e.find("label"); it != e.end()) {
      if (!it->is_string()) throw Error(ErrorKind::Format, file.string() + ": label of '" + entry.id + "' must be a string");
      entry.label = it->get<std::string>();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::string stats_to_csv(std::span<const SnippetStats> stats) {
  std::string out = "id,label,loc,cpl_mean,deviation,selected\n";
  for (const auto& s : stats) {
    out += s.id;
    out += ',';
    out += s.label;
    out += ',';
    out += std::to_string(s.loc);
    out += ',';
    text::append_double(out, s.cpl_mean);
    out += ',';
    text::append_double(out, s.deviation);
    out += ',';
    out += s.selected ? "1" : "0";
    out += '\n';
  }
  return out;
}

}  // namespace codeattn
