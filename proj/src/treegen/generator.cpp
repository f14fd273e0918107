#include "logictree/treegen/generator.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "logictree/error.hpp"
#include "logictree/logic/closure.hpp"
#include "logictree/logic/entailment.hpp"
#include "logictree/rng.hpp"

namespace logictree::treegen {

using logic::Connective;
using logic::disj;
using logic::imp;
using logic::neg;

namespace {

int rule_atoms(InferenceRule r) {
  return r == InferenceRule::kConstructiveDilemma ||
                 r == InferenceRule::kDisjunctionElimination
             ? 2
             : 1;
}

// Cheapest completion of a chain of the given height: one fresh atom and one
// extra leaf per level.
int atom_min(int height) { return height; }
int leaf_min(int height) { return height == 0 ? 1 : height + 1; }

// Builds one candidate tree top-down. A goal formula is expanded by picking a
// rule whose conclusion schema matches it and instantiating the remaining
// schema variables with fresh atoms; one premise (the spine) is derived at the
// next height down, the others become leaves or one-step side derivations.
class Builder {
 public:
  Builder(const DifficultyProfile& p, std::uint64_t seed) : p_(p), rng_(seed) {}

  ArgumentTree build() {
    ArgumentTree t;
    internal_at_.assign(p_.depth, 0);
    reserved_atoms_ = 3 * p_.distractor_chains;
    Formula goal = root_goal();
    t.root = derive(goal, p_.depth, 0);

    bounded_ = false;
    reserved_atoms_ = 0;
    for (int i = 0; i < p_.distractor_chains; ++i) {
      Formula g = fresh();
      const int h = 1 + static_cast<int>(rng_.below(2));
      t.distractors.push_back(derive(g, h, 0));
    }

    int next_id = 0;
    number(t.root, next_id);
    for (auto& d : t.distractors) number(d, next_id);
    t.atom_count = next_atom_;
    return t;
  }

 private:
  Formula fresh() { return logic::atom(next_atom_++); }

  int atoms_left() const {
    return p_.atom_budget - static_cast<int>(next_atom_);
  }

  Formula root_goal() {
    // Shapes: atom, ¬atom, atom→atom, atom∨atom (weights 2:1:1:1). The
    // compound shapes open up the rules whose conclusions are compound.
    const bool two_atoms_fit =
        2 + reserved_atoms_ + atom_min(p_.depth) <= atoms_left();
    const std::uint64_t roll = rng_.below(two_atoms_fit ? 5 : 3);
    if (roll <= 1) return fresh();
    if (roll == 2) return neg(fresh());
    Formula a = fresh();
    Formula b = fresh();
    return roll == 3 ? imp(a, b) : disj(a, b);
  }

  std::vector<InferenceRule> candidates(const Formula& goal, int height) const {
    std::vector<InferenceRule> out;
    for (InferenceRule r : logic::kAllRules) {
      switch (r) {
        case InferenceRule::kModusTollens:
        case InferenceRule::kReductioAdAbsurdum:
          if (!goal.is(Connective::kNot)) continue;
          break;
        case InferenceRule::kHypotheticalSyllogism:
          if (!goal.is(Connective::kImplies)) continue;
          break;
        case InferenceRule::kConstructiveDilemma:
          if (!goal.is(Connective::kOr)) continue;
          break;
        default:
          break;
      }
      if (rule_atoms(r) + reserved_atoms_ + atom_min(height - 1) >
          atoms_left()) {
        continue;
      }
      if (bounded_ && leaves_ + reserved_leaves_ +
                              static_cast<int>(logic::arity(r)) - 1 +
                              leaf_min(height - 1) >
                          p_.leaf_budget) {
        continue;
      }
      out.push_back(r);
    }
    return out;
  }

  std::vector<Formula> instantiate(InferenceRule r, const Formula& goal) {
    switch (r) {
      case InferenceRule::kModusPonens: {
        Formula p = fresh();
        return {imp(p, goal), p};
      }
      case InferenceRule::kModusTollens: {
        Formula q = fresh();
        return {imp(goal.child(), q), neg(q)};
      }
      case InferenceRule::kHypotheticalSyllogism: {
        Formula q = fresh();
        return {imp(goal.antecedent(), q), imp(q, goal.consequent())};
      }
      case InferenceRule::kDisjunctiveSyllogism: {
        Formula p = fresh();
        return {disj(p, goal), neg(p)};
      }
      case InferenceRule::kReductioAdAbsurdum: {
        Formula q = fresh();
        return {imp(goal.child(), q), imp(goal.child(), neg(q))};
      }
      case InferenceRule::kConstructiveDilemma: {
        Formula p = fresh();
        Formula r2 = fresh();
        return {imp(p, goal.left()), imp(r2, goal.right()), disj(p, r2)};
      }
      case InferenceRule::kDisjunctionElimination: {
        Formula p = fresh();
        Formula q = fresh();
        return {disj(p, q), imp(p, goal), imp(q, goal)};
      }
    }
    throw InternalError("unknown rule");
  }

  bool side_fits(int height, int child_level) const {
    if (!bounded_ || height - 1 < 1) return false;
    // The spine child on this level is not counted yet; keep its slot.
    if (internal_at_[child_level] + 1 >= p_.quota(child_level)) return false;
    // A one-step Modus Ponens costs one atom and two leaves and fits any goal.
    if (1 + reserved_atoms_ > atoms_left()) return false;
    return leaves_ + reserved_leaves_ + 2 <= p_.leaf_budget;
  }

  TreeNode derive(const Formula& goal, int height, int level) {
    TreeNode node;
    node.conclusion = goal;
    node.height = height;
    if (height == 0) {
      ++leaves_;
      return node;
    }
    if (bounded_) ++internal_at_[level];

    const auto rules = candidates(goal, height);
    if (rules.empty()) {
      throw GenerationError("no rule fits the remaining budget");
    }
    const InferenceRule r = rules[rng_.below(rules.size())];
    std::vector<Formula> premises = instantiate(r, goal);
    const std::size_t spine = rng_.below(premises.size());

    reserved_atoms_ += atom_min(height - 1);
    reserved_leaves_ += leaf_min(height - 1) + static_cast<int>(premises.size()) - 1;
    node.children.resize(premises.size());
    for (std::size_t i = 0; i < premises.size(); ++i) {
      if (i == spine) continue;
      reserved_leaves_ -= 1;
      if (side_fits(height, level + 1) && rng_.chance(p_.side_expansion_rate)) {
        node.children[i] = derive(premises[i], 1, level + 1);
      } else {
        node.children[i] = derive(premises[i], 0, level + 1);
      }
    }
    reserved_atoms_ -= atom_min(height - 1);
    reserved_leaves_ -= leaf_min(height - 1);
    node.children[spine] = derive(premises[spine], height - 1, level + 1);
    node.rule = r;
    return node;
  }

  static void number(TreeNode& n, int& next) {
    n.node_id = next++;
    n.hidden = !n.is_leaf();
    for (auto& c : n.children) number(c, next);
  }

  const DifficultyProfile& p_;
  Rng rng_;
  std::uint32_t next_atom_ = 0;
  bool bounded_ = true;
  int leaves_ = 0;
  int reserved_atoms_ = 0;
  int reserved_leaves_ = 0;
  std::vector<int> internal_at_;
};

bool has_duplicates(const std::vector<Formula>& fs) {
  std::unordered_set<Formula, logic::FormulaHash> seen;
  for (const auto& f : fs) {
    if (!seen.insert(f).second) return true;
  }
  return false;
}

}  // namespace

ArgumentTree build_tree(const DifficultyProfile& profile, std::uint64_t seed,
                        int max_attempts) {
  profile.validate();
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Builder builder(profile, derive_seed(seed, "tree", attempt));
    ArgumentTree tree;
    try {
      tree = builder.build();
    } catch (const GenerationError&) {
      continue;
    }
    const auto premises = tree.premises();
    if (has_duplicates(premises)) continue;
    if (!logic::satisfiable(premises)) continue;

    logic::ClosureOptions opts;
    opts.stop_at = tree.root.conclusion;
    const auto closure = logic::forward_closure(premises, profile.depth, opts);
    if (closure.depth_of(tree.root.conclusion) != profile.depth) continue;
    return tree;
  }
  throw GenerationError("no valid tree after " + std::to_string(max_attempts) +
                        " attempts (depth=" + std::to_string(profile.depth) +
                        ", seed=" + std::to_string(seed) + ")");
}

std::vector<Question> extract_questions(const ArgumentTree& tree,
                                        const DifficultyProfile& profile,
                                        std::uint64_t seed) {
  Rng rng(derive_seed(seed, "questions"));
  const logic::EntailmentOracle oracle(tree.premises());

  const auto internal = tree.internal_nodes();
  std::vector<const TreeNode*> picks(internal.begin() + 1, internal.end());
  rng.shuffle(std::span<const TreeNode*>(picks));
  picks.resize(std::min<std::size_t>(picks.size(),
                                     static_cast<std::size_t>(profile.num_subquestions)));
  std::sort(picks.begin(), picks.end(),
            [](const TreeNode* a, const TreeNode* b) { return a->node_id < b->node_id; });
  picks.insert(picks.begin(), &tree.root);

  std::vector<Question> out;
  out.reserve(picks.size());
  for (const TreeNode* n : picks) {
    Question q;
    q.kind = n == &tree.root ? QuestionKind::kRoot : QuestionKind::kIntermediate;
    q.node_id = n->node_id;
    q.polarity = rng.coin() ? Polarity::kAsserted : Polarity::kNegated;
    q.statement = q.polarity == Polarity::kAsserted ? n->conclusion
                                                    : neg(n->conclusion);
    q.gold = oracle.verdict(q.statement);
    const Verdict expected =
        q.polarity == Polarity::kAsserted ? Verdict::kTrue : Verdict::kFalse;
    if (q.gold != expected) {
      throw InternalError("oracle disagrees with the derivation at node " +
                          std::to_string(n->node_id) + ": " +
                          std::string(logic::to_string(q.gold)));
    }
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<AbstractInstance> make_variant_group(std::uint64_t skeleton_seed,
                                                 const DifficultyProfile& profile,
                                                 int k,
                                                 std::size_t fact_pool_size) {
  if (k < 2) throw PreconditionError("a variant group needs k >= 2");
  ArgumentTree tree = build_tree(profile, skeleton_seed);
  auto questions = extract_questions(tree, profile, skeleton_seed);
  const std::string hash = skeleton_hash(tree);

  const std::size_t n = tree.atom_count;
  if (fact_pool_size < n * static_cast<std::size_t>(k)) {
    throw CapacityError("fact pool of " + std::to_string(fact_pool_size) +
                        " cannot supply " + std::to_string(k) +
                        " disjoint assignments of " + std::to_string(n) +
                        " atoms");
  }
  std::vector<std::size_t> order(fact_pool_size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(skeleton_seed, "facts"));
  rng.shuffle(std::span<std::size_t>(order));

  std::vector<AbstractInstance> group;
  group.reserve(k);
  for (int v = 0; v < k; ++v) {
    AbstractInstance inst;
    inst.variant_idx = v;
    inst.seed = derive_seed(skeleton_seed, "variant", static_cast<std::uint64_t>(v));
    inst.tree = tree;
    inst.questions = questions;
    inst.skeleton_hash = hash;
    inst.fact_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(v * n),
                             order.begin() + static_cast<std::ptrdiff_t>((v + 1) * n));
    group.push_back(std::move(inst));
  }
  return group;
}

}  // namespace logictree::treegen
