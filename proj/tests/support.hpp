#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "logictree/surface/dataset.hpp"
#include "logictree/surface/instance.hpp"
#include "logictree/surface/templates.hpp"
#include "logictree/treegen/generator.hpp"

namespace testing_support {

inline const logictree::surface::FactPool& facts() {
  static const auto pool =
      logictree::surface::load_fact_pool(logictree::surface::default_data_dir() / "facts.tsv");
  return pool;
}

inline const logictree::surface::TemplatePool& templates() {
  static const auto pool = logictree::surface::load_template_pool(
      logictree::surface::default_data_dir() / "expressions.json");
  return pool;
}

inline std::vector<logictree::surface::Instance> make_group(int depth, std::uint64_t seed,
                                                            int k = 5, int group_id = 0) {
  const auto profile = logictree::treegen::DifficultyProfile::standard(depth);
  const auto abstract = logictree::treegen::make_variant_group(seed, profile, k, facts().size());
  std::vector<logictree::surface::Instance> out;
  for (const auto& a : abstract) {
    out.push_back(logictree::surface::instantiate(a, group_id, profile, facts(), templates()));
  }
  return out;
}

inline logictree::surface::Instance make_instance(int depth, std::uint64_t seed) {
  return make_group(depth, seed, 2).front();
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("logictree-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing_support
