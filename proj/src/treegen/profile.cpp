#include "logictree/treegen/profile.hpp"

#include <string>

#include "logictree/error.hpp"
#include "logictree/logic/entailment.hpp"

namespace logictree::treegen {

DifficultyProfile DifficultyProfile::standard(int depth) {
  if (depth < 1 || depth > kMaxDepth) {
    throw PreconditionError("depth must be in [1, 8], got " +
                            std::to_string(depth));
  }
  DifficultyProfile p;
  p.depth = depth;
  // ceil(3d/4): 1 2 3 3 4 5 6 6 for d = 1..8.
  p.width = (3 * depth + 3) / 4;
  p.num_subquestions = depth - 1;
  p.distractor_chains = depth >= 2 ? 1 : 0;
  p.level_quota.assign(depth, p.width);
  p.level_quota[0] = 1;
  p.leaf_budget = 2 * depth + p.width + 1;
  p.atom_budget = 18;
  return p;
}

void DifficultyProfile::validate() const {
  const auto fail = [](const std::string& what) {
    throw PreconditionError("invalid difficulty profile: " + what);
  };
  if (depth < 1 || depth > kMaxDepth) fail("depth outside [1, 8]");
  if (width < 1 || width > kMaxWidth) fail("width outside [1, 6]");
  if (num_subquestions < 0 || num_subquestions > kMaxSubquestions) {
    fail("num_subquestions outside [0, 7]");
  }
  if (distractor_chains < 0) fail("negative distractor_chains");
  if (!level_quota.empty()) {
    if (static_cast<int>(level_quota.size()) != depth) {
      fail("level_quota must have one entry per level");
    }
    if (level_quota[0] != 1) fail("level_quota[0] must be 1 (the root)");
    for (int q : level_quota) {
      if (q < 1 || q > width) fail("level_quota entries must be in [1, width]");
    }
  }
  int max_internal_below_root = 0;
  for (int l = 1; l < depth; ++l) max_internal_below_root += quota(l);
  if (num_subquestions > max_internal_below_root) {
    fail("num_subquestions exceeds the internal nodes the tree can hold");
  }
  if (leaf_budget < depth + 1) fail("leaf_budget below depth + 1");
  if (atom_budget > static_cast<int>(logic::kDefaultAtomCap)) {
    fail("atom_budget above the truth-table cap");
  }
  if (atom_budget < depth + 2 + 3 * distractor_chains) {
    fail("atom_budget too small for the depth and distractor count");
  }
  if (side_expansion_rate < 0.0 || side_expansion_rate > 1.0) {
    fail("side_expansion_rate outside [0, 1]");
  }
}

}  // namespace logictree::treegen
