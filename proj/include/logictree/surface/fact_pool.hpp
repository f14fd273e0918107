#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace logictree::surface {

struct FactFilters {
  int min_words = 4;
  int max_words = 30;
  // A line containing any of these substrings is dropped.
  std::vector<std::string> banned = {"?"};
  bool deduplicate = true;
};

struct Fact {
  std::string id;
  std::string text;
};

struct FactPool {
  std::vector<Fact> facts;
  std::string provenance;
  // Lines read versus kept, for the manifest.
  std::size_t lines_read = 0;
  std::size_t dropped = 0;

  std::size_t size() const { return facts.size(); }
  const Fact& operator[](std::size_t i) const { return facts[i]; }
};

// Line format: id<TAB>text. Blank lines and lines starting with '#' are
// skipped. ParseError (with line number) on a malformed or duplicate-id line;
// CapacityError when nothing survives the filters.
FactPool parse_fact_pool(std::istream& in, const FactFilters& filters,
                         std::string provenance);
FactPool load_fact_pool(const std::filesystem::path& path,
                        const FactFilters& filters = {});

}  // namespace logictree::surface
