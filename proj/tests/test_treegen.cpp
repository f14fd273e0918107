#include <gtest/gtest.h>

#include <set>

#include "logictree/error.hpp"
#include "logictree/logic/closure.hpp"
#include "logictree/treegen/generator.hpp"
#include "logictree/treegen/verify.hpp"
#include "support.hpp"

using namespace logictree;
using namespace logictree::treegen;
using testing_support::make_group;
using testing_support::make_instance;

namespace {

int count_internal_at(const TreeNode& n, int level, int want) {
  if (n.is_leaf()) return 0;
  int c = level == want ? 1 : 0;
  for (const auto& ch : n.children) c += count_internal_at(ch, level + 1, want);
  return c;
}

void check_sound(const TreeNode& n) {
  if (n.is_leaf()) return;
  std::vector<Formula> premises;
  for (const auto& c : n.children) {
    check_sound(c);
    premises.push_back(c.conclusion);
  }
  EXPECT_EQ(logic::apply_rule(*n.rule, premises), n.conclusion);
}

}  // namespace

TEST(Profile, StandardTable) {
  const int widths[] = {1, 2, 3, 3, 4, 5, 6, 6};
  for (int d = 1; d <= 8; ++d) {
    const auto p = DifficultyProfile::standard(d);
    EXPECT_EQ(p.depth, d);
    EXPECT_EQ(p.width, widths[d - 1]);
    EXPECT_EQ(p.num_subquestions, d - 1);
    EXPECT_NO_THROW(p.validate());
  }
  EXPECT_THROW(DifficultyProfile::standard(0), PreconditionError);
  EXPECT_THROW(DifficultyProfile::standard(9), PreconditionError);
}

TEST(Profile, ValidateRejectsBadShapes) {
  auto p = DifficultyProfile::standard(3);
  p.num_subquestions = 20;
  EXPECT_THROW(p.validate(), PreconditionError);
  p = DifficultyProfile::standard(3);
  p.atom_budget = 30;
  EXPECT_THROW(p.validate(), PreconditionError);
  p = DifficultyProfile::standard(3);
  p.side_expansion_rate = 1.5;
  EXPECT_THROW(p.validate(), PreconditionError);
}

TEST(BuildTree, DepthOneIsSingleRule) {
  const auto t = build_tree(DifficultyProfile::standard(1), 7);
  EXPECT_EQ(t.depth(), 1);
  EXPECT_TRUE(t.distractors.empty());
  EXPECT_GE(t.leaf_count(), 2u);
  EXPECT_LE(t.leaf_count(), 3u);
  for (const auto& c : t.root.children) EXPECT_TRUE(c.is_leaf());
}

TEST(BuildTree, DepthEightWidthSix) {
  const auto p = DifficultyProfile::standard(8);
  ASSERT_EQ(p.width, 6);
  const auto t = build_tree(p, 42);
  EXPECT_EQ(t.depth(), 8);
  EXPECT_LE(static_cast<int>(t.leaf_count()), p.leaf_budget);
  for (int l = 0; l < 8; ++l) EXPECT_LE(count_internal_at(t.root, 0, l), p.width);
  const auto premises = t.premises();
  logic::ClosureOptions opts;
  opts.stop_at = t.root.conclusion;
  EXPECT_EQ(logic::forward_closure(premises, 8, opts).depth_of(t.root.conclusion), 8);
}

TEST(BuildTree, PostConditionsAcrossSeeds) {
  for (int d = 1; d <= 8; ++d) {
    const auto p = DifficultyProfile::standard(d);
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      const auto t = build_tree(p, seed);
      ASSERT_EQ(t.depth(), d);
      check_sound(t.root);
      for (const auto& x : t.distractors) check_sound(x);
      const auto premises = t.premises();
      EXPECT_TRUE(logic::satisfiable(premises));
      EXPECT_LE(t.atom_count, static_cast<std::uint32_t>(p.atom_budget));
      logic::ClosureOptions opts;
      opts.stop_at = t.root.conclusion;
      EXPECT_EQ(logic::forward_closure(premises, d, opts).depth_of(t.root.conclusion), d)
          << "depth " << d << " seed " << seed;
    }
  }
}

TEST(BuildTree, Deterministic) {
  const auto p = DifficultyProfile::standard(6);
  EXPECT_EQ(build_tree(p, 99), build_tree(p, 99));
  EXPECT_NE(skeleton_signature(build_tree(p, 99)), skeleton_signature(build_tree(p, 100)));
}

TEST(BuildTree, RetryBudgetExhaustionThrows) {
  auto p = DifficultyProfile::standard(4);
  EXPECT_THROW(build_tree(p, 1, 0), GenerationError);
}

TEST(BuildTree, UsesEveryRule) {
  std::set<InferenceRule> seen;
  std::function<void(const TreeNode&)> walk = [&](const TreeNode& n) {
    if (n.rule) seen.insert(*n.rule);
    for (const auto& c : n.children) walk(c);
  };
  for (std::uint64_t s = 0; s < 200; ++s) walk(build_tree(DifficultyProfile::standard(4), s).root);
  EXPECT_EQ(seen.size(), 7u);
}

TEST(Questions, RootFirstThenSubquestions) {
  const auto p = DifficultyProfile::standard(8);
  const auto t = build_tree(p, 3);
  const auto qs = extract_questions(t, p, 3);
  ASSERT_EQ(qs.size(), 8u);
  EXPECT_EQ(qs[0].kind, QuestionKind::kRoot);
  EXPECT_EQ(qs[0].node_id, t.root.node_id);
  for (std::size_t i = 1; i < qs.size(); ++i) {
    EXPECT_EQ(qs[i].kind, QuestionKind::kIntermediate);
    EXPECT_GT(qs[i].node_id, qs[i - 1].node_id);
    EXPECT_TRUE(t.find(qs[i].node_id)->hidden);
  }
}

TEST(Questions, PolarityDecidesLabel) {
  int asserted = 0;
  int negated = 0;
  for (std::uint64_t s = 0; s < 60; ++s) {
    const auto p = DifficultyProfile::standard(3);
    const auto t = build_tree(p, s);
    for (const auto& q : extract_questions(t, p, s)) {
      const auto& concl = t.find(q.node_id)->conclusion;
      if (q.polarity == Polarity::kAsserted) {
        ++asserted;
        EXPECT_EQ(q.statement, concl);
        EXPECT_EQ(q.gold, Verdict::kTrue);
      } else {
        ++negated;
        EXPECT_EQ(q.statement, logic::neg(concl));
        EXPECT_EQ(q.gold, Verdict::kFalse);
      }
    }
  }
  EXPECT_GT(asserted, 20);
  EXPECT_GT(negated, 20);
}

TEST(VariantGroup, FiveVariantsShareSkeleton) {
  const auto p = DifficultyProfile::standard(3);
  const auto g = make_variant_group(17, p, 5, testing_support::facts().size());
  ASSERT_EQ(g.size(), 5u);
  std::set<std::vector<std::size_t>> assignments;
  std::set<std::size_t> used;
  for (const auto& v : g) {
    EXPECT_EQ(v.skeleton_hash, g[0].skeleton_hash);
    EXPECT_EQ(skeleton_hash(v.tree), v.skeleton_hash);
    assignments.insert(v.fact_indices);
    used.insert(v.fact_indices.begin(), v.fact_indices.end());
  }
  EXPECT_EQ(assignments.size(), 5u);
  EXPECT_EQ(used.size(), 5 * g[0].tree.atom_count);
}

TEST(VariantGroup, MinimalGroup) {
  const auto g = make_variant_group(4, DifficultyProfile::standard(1), 2, 100);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0].tree.root.rule, g[1].tree.root.rule);
  EXPECT_NE(g[0].seed, g[1].seed);
}

TEST(VariantGroup, Errors) {
  const auto p = DifficultyProfile::standard(2);
  EXPECT_THROW(make_variant_group(1, p, 1, 100), PreconditionError);
  EXPECT_THROW(make_variant_group(1, p, 5, 6), CapacityError);
}

TEST(SkeletonHash, RenamingInvariant) {
  const auto t = build_tree(DifficultyProfile::standard(3), 8);
  EXPECT_EQ(skeleton_hash(t).size(), 16u);
  EXPECT_EQ(skeleton_hash(t), skeleton_hash(t));
}

TEST(Verify, FreshInstancePasses) {
  for (int d = 1; d <= 8; ++d) {
    const auto inst = make_instance(d, 100 + d);
    const auto r = verify_instance(inst);
    EXPECT_TRUE(r.passed()) << inst.id;
    EXPECT_EQ(r.checks.size(), 5u);
  }
}

TEST(Verify, FlippedLabelFailsOnThatQuestion) {
  auto inst = make_instance(5, 9);
  ASSERT_GE(inst.questions.size(), 3u);
  auto& q = inst.questions[2];
  q.label = q.label == Verdict::kTrue ? Verdict::kFalse : Verdict::kTrue;
  const auto r = verify_instance(inst);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.find(kCheckLabels)->passed);
  EXPECT_EQ(r.failing_questions, std::vector<std::size_t>{2});
  EXPECT_TRUE(r.find(kCheckTree)->passed);
}

TEST(Verify, DeletedPremiseFailsDepthOrLabels) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto inst = make_instance(4, seed);
    // Drop a leaf of the main tree, not a distractor leaf.
    std::function<Formula(const TreeNode&)> first_leaf = [&](const TreeNode& n) {
      return n.is_leaf() ? n.conclusion : first_leaf(n.children.front());
    };
    const Formula victim = first_leaf(inst.tree->root);
    auto it = std::find(inst.premises.begin(), inst.premises.end(), victim);
    ASSERT_NE(it, inst.premises.end());
    const auto pos = it - inst.premises.begin();
    inst.premises.erase(it);
    inst.premise_texts.erase(inst.premise_texts.begin() + pos);
    const auto r = verify_instance(inst);
    EXPECT_FALSE(r.passed());
    EXPECT_TRUE(!r.find(kCheckDepth)->passed || !r.find(kCheckLabels)->passed);
  }
}

TEST(Verify, TamperedHashAndMissingTree) {
  auto inst = make_instance(2, 5);
  inst.skeleton_hash = "0000000000000000";
  EXPECT_FALSE(verify_instance(inst).find(kCheckSkeleton)->passed);
  inst.tree.reset();
  const auto r = verify_instance(inst);
  EXPECT_FALSE(r.passed());
  EXPECT_TRUE(r.find(kCheckLabels)->passed);
}

TEST(Verify, ContradictoryPremises) {
  auto inst = make_instance(2, 6);
  inst.premises.push_back(logic::neg(inst.premises.front()));
  const auto r = verify_instance(inst);
  EXPECT_FALSE(r.find(kCheckSatisfiable)->passed);
}
