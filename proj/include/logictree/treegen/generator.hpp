#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "logictree/treegen/profile.hpp"
#include "logictree/treegen/tree.hpp"

namespace logictree::treegen {

inline constexpr int kDefaultMaxAttempts = 32;

// Deterministic for a fixed (profile, seed). Every internal node is a sound
// rule application, the leaves are jointly satisfiable, and the forward
// chainer reaches the root in exactly profile.depth rounds. Draws that fail
// any of these are retried up to `max_attempts` times, then GenerationError.
ArgumentTree build_tree(const DifficultyProfile& profile, std::uint64_t seed,
                        int max_attempts = kDefaultMaxAttempts);

// One root question plus up to profile.num_subquestions hidden intermediate
// conclusions, each asserted or negated by a fair coin from `seed`. Gold
// labels come from the entailment oracle over tree.premises().
std::vector<Question> extract_questions(const ArgumentTree& tree,
                                        const DifficultyProfile& profile,
                                        std::uint64_t seed);

// One variant of a consistency group: the shared tree and questions, plus the
// variant's own fact assignment and surface seed.
struct AbstractInstance {
  int variant_idx = 0;
  std::uint64_t seed = 0;
  ArgumentTree tree;
  std::vector<Question> questions;
  std::string skeleton_hash;
  // fact_indices[atom id] indexes the fact pool.
  std::vector<std::size_t> fact_indices;
};

// k variants sharing one skeleton. Each variant draws its own disjoint slice
// of the fact pool; CapacityError when the pool cannot supply k slices.
std::vector<AbstractInstance> make_variant_group(std::uint64_t skeleton_seed,
                                                 const DifficultyProfile& profile,
                                                 int k,
                                                 std::size_t fact_pool_size);

}  // namespace logictree::treegen
