#include "logictree/surface/fact_pool.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "logictree/error.hpp"

namespace logictree::surface {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

int word_count(std::string_view s) {
  int n = 0;
  bool in_word = false;
  for (char c : s) {
    const bool space = c == ' ' || c == '\t';
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return n;
}

}  // namespace

FactPool parse_fact_pool(std::istream& in, const FactFilters& filters,
                         std::string provenance) {
  FactPool pool;
  pool.provenance = std::move(provenance);
  std::unordered_set<std::string> ids;
  std::unordered_set<std::string> texts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    ++pool.lines_read;

    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError("expected id<TAB>text", lineno);
    }
    std::string id = trim(std::string_view(line).substr(0, tab));
    std::string text = trim(std::string_view(line).substr(tab + 1));
    if (id.empty()) throw ParseError("empty fact id", lineno);
    if (text.empty()) throw ParseError("empty fact text", lineno);
    if (text.find('\t') != std::string::npos) {
      throw ParseError("more than one tab", lineno);
    }
    if (!ids.insert(id).second) {
      throw ParseError("duplicate fact id '" + id + "'", lineno);
    }

    const int words = word_count(text);
    bool keep = words >= filters.min_words && words <= filters.max_words;
    for (const auto& b : filters.banned) {
      if (keep && text.find(b) != std::string::npos) keep = false;
    }
    if (keep && filters.deduplicate && !texts.insert(text).second) keep = false;
    if (!keep) {
      ++pool.dropped;
      continue;
    }
    pool.facts.push_back({std::move(id), std::move(text)});
  }
  if (pool.facts.empty()) {
    throw CapacityError("fact pool is empty after filtering (" +
                        std::to_string(pool.lines_read) + " lines read)");
  }
  return pool;
}

FactPool load_fact_pool(const std::filesystem::path& path,
                        const FactFilters& filters) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open fact pool " + path.string());
  return parse_fact_pool(in, filters, path.filename().string());
}

}  // namespace logictree::surface
