#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "logictree/logic/entailment.hpp"
#include "logictree/logic/formula.hpp"
#include "logictree/logic/rules.hpp"

namespace logictree::treegen {

using logic::Formula;
using logic::InferenceRule;
using logic::Verdict;

struct TreeNode {
  Formula conclusion;
  // nullopt marks a leaf (a paragraph premise).
  std::optional<InferenceRule> rule;
  std::vector<TreeNode> children;
  int node_id = 0;
  // Longest rule chain from this node down to a leaf.
  int height = 0;
  bool hidden = false;

  bool is_leaf() const { return !rule.has_value(); }

  bool operator==(const TreeNode&) const = default;
};

struct ArgumentTree {
  TreeNode root;
  // Self-contained mini-derivations over atoms disjoint from the main tree.
  // Their leaves join the paragraph; their conclusions are never asked.
  std::vector<TreeNode> distractors;
  std::uint32_t atom_count = 0;

  int depth() const { return root.height; }

  // Paragraph premises: main-tree leaves in pre-order, then distractor leaves.
  std::vector<Formula> premises() const;
  // Internal nodes of the main tree, pre-order, root first.
  std::vector<const TreeNode*> internal_nodes() const;
  const TreeNode* find(int node_id) const;
  std::size_t leaf_count() const;

  bool operator==(const ArgumentTree&) const = default;
};

enum class QuestionKind : std::uint8_t { kRoot, kIntermediate };
enum class Polarity : std::uint8_t { kAsserted, kNegated };

struct Question {
  Formula statement;
  Verdict gold = Verdict::kTrue;
  QuestionKind kind = QuestionKind::kRoot;
  int node_id = 0;
  Polarity polarity = Polarity::kAsserted;

  bool operator==(const Question&) const = default;
};

// Canonical text of the rule-labelled shape with atoms renamed in order of
// first appearance. Two trees with equal signatures are the same skeleton.
std::string skeleton_signature(const ArgumentTree& tree);
// FNV-1a 64 of the signature, 16 lowercase hex digits.
std::string skeleton_hash(const ArgumentTree& tree);

}  // namespace logictree::treegen
