#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "logictree/surface/instance.hpp"

namespace logictree::surface {

inline constexpr std::string_view kManifestSchema = "logictree.manifest/1";

struct GenerateOptions {
  std::vector<int> depths = {1, 2, 3, 4, 5, 6, 7, 8};
  int groups_per_depth = 240;
  int variants = 5;
  std::uint64_t seed = 1;
  // Worker threads; output does not depend on it.
  unsigned jobs = 1;
};

// Groups in (depth, group) order, variants contiguous. Group ids are global
// and dense across depths.
std::vector<Instance> generate_dataset(const GenerateOptions& options,
                                       const FactPool& pool,
                                       const TemplatePool& templates);

inline constexpr std::array<const char*, 3> kSplitNames = {"train", "val", "test"};

struct SplitCounts {
  std::size_t groups = 0;
  std::size_t instances = 0;
  std::size_t questions = 0;
};

struct Manifest {
  std::uint64_t seed = 0;
  std::array<int, 3> ratios = {10, 1, 1};
  std::array<SplitCounts, 3> splits;
  // depth → per-split group counts.
  std::vector<std::pair<int, std::array<std::size_t, 3>>> groups_by_depth;
  std::size_t total_instances = 0;
  std::size_t total_questions = 0;

  std::string to_json() const;
};

// Group-atomic split. Within each depth the groups are shuffled by `seed` and
// cut by largest-remainder rounding of the ratios, so every group lands whole
// in one split. Writes train/val/test.jsonl and manifest.json into out_dir.
// PreconditionError on empty input or non-positive ratios; IoError on write
// failure.
Manifest write_dataset(const std::vector<Instance>& instances,
                       std::array<int, 3> ratios, std::uint64_t seed,
                       const std::filesystem::path& out_dir);

// Split assignment only (no I/O): for each instance, 0/1/2.
std::vector<int> assign_splits(const std::vector<Instance>& instances,
                               std::array<int, 3> ratios, std::uint64_t seed);

// Largest-remainder apportionment of n items by ratios; ties go to the
// earlier split.
std::array<std::size_t, 3> apportion(std::size_t n, std::array<int, 3> ratios);

}  // namespace logictree::surface
