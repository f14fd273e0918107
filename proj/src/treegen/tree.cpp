#include "logictree/treegen/tree.hpp"

#include <cstdio>
#include <map>

#include "logictree/rng.hpp"

namespace logictree::treegen {

namespace {

void collect_leaves(const TreeNode& n, std::vector<Formula>& out) {
  if (n.is_leaf()) {
    out.push_back(n.conclusion);
    return;
  }
  for (const auto& c : n.children) collect_leaves(c, out);
}

void collect_internal(const TreeNode& n, std::vector<const TreeNode*>& out) {
  if (n.is_leaf()) return;
  out.push_back(&n);
  for (const auto& c : n.children) collect_internal(c, out);
}

const TreeNode* find_in(const TreeNode& n, int id) {
  if (n.node_id == id) return &n;
  for (const auto& c : n.children) {
    if (const TreeNode* hit = find_in(c, id)) return hit;
  }
  return nullptr;
}

class Canonicalizer {
 public:
  void formula(const Formula& f, std::string& out) {
    using logic::Connective;
    switch (f.kind()) {
      case Connective::kAtom: {
        auto [it, _] = slots_.try_emplace(f.atom_id().value,
                                          static_cast<std::uint32_t>(slots_.size()));
        out += 'x';
        out += std::to_string(it->second);
        return;
      }
      case Connective::kNot:
        out += "(~";
        formula(f.child(), out);
        out += ')';
        return;
      default:
        out += f.is(Connective::kAnd) ? "(&" : f.is(Connective::kOr) ? "(|" : "(>";
        formula(f.left(), out);
        out += ' ';
        formula(f.right(), out);
        out += ')';
    }
  }

  void node(const TreeNode& n, std::string& out) {
    out += '[';
    out += n.is_leaf() ? "leaf" : std::string(logic::wire_name(*n.rule));
    out += ' ';
    formula(n.conclusion, out);
    for (const auto& c : n.children) node(c, out);
    out += ']';
  }

 private:
  std::map<std::uint32_t, std::uint32_t> slots_;
};

}  // namespace

std::vector<Formula> ArgumentTree::premises() const {
  std::vector<Formula> out;
  collect_leaves(root, out);
  for (const auto& d : distractors) collect_leaves(d, out);
  return out;
}

std::vector<const TreeNode*> ArgumentTree::internal_nodes() const {
  std::vector<const TreeNode*> out;
  collect_internal(root, out);
  return out;
}

const TreeNode* ArgumentTree::find(int node_id) const {
  if (const TreeNode* hit = find_in(root, node_id)) return hit;
  for (const auto& d : distractors) {
    if (const TreeNode* hit = find_in(d, node_id)) return hit;
  }
  return nullptr;
}

std::size_t ArgumentTree::leaf_count() const {
  std::vector<Formula> main;
  collect_leaves(root, main);
  return main.size();
}

std::string skeleton_signature(const ArgumentTree& tree) {
  Canonicalizer canon;
  std::string out;
  canon.node(tree.root, out);
  for (const auto& d : tree.distractors) {
    out += '+';
    canon.node(d, out);
  }
  return out;
}

std::string skeleton_hash(const ArgumentTree& tree) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(skeleton_signature(tree))));
  return buf;
}

}  // namespace logictree::treegen
