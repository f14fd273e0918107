#pragma once

#include <string_view>
#include <vector>

namespace logictree::treegen {

// Version tag of the depth → (width, sub-questions, distractors) mapping used
// by DifficultyProfile::standard. Recorded in every dataset manifest.
inline constexpr std::string_view kProfileTableVersion = "logictree-profile/v1";

inline constexpr int kMaxDepth = 8;
inline constexpr int kMaxWidth = 6;
inline constexpr int kMaxSubquestions = 7;

// Shape controls for one argument tree.
//
// `width` caps the number of derived (internal) nodes on any one level of the
// tree; `level_quota[l]` can tighten that per level (level 0 is the root).
// Premise slots beside the main derivation chain are expanded into one-step
// derivations until the quota, `leaf_budget` or `atom_budget` runs out.
struct DifficultyProfile {
  int depth = 1;
  int width = 1;
  int num_subquestions = 0;
  int distractor_chains = 0;
  std::vector<int> level_quota;
  int leaf_budget = 4;
  // Distinct atoms per instance, distractors included. Keeps every instance
  // well inside the truth-table cap.
  int atom_budget = 18;
  // Probability that an eligible side premise is expanded.
  double side_expansion_rate = 0.5;

  // The versioned default table.
  static DifficultyProfile standard(int depth);

  // Throws PreconditionError describing the first violated bound.
  void validate() const;

  int quota(int level) const {
    return level < static_cast<int>(level_quota.size()) ? level_quota[level]
                                                        : width;
  }
};

}  // namespace logictree::treegen
