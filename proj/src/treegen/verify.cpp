#include "logictree/treegen/verify.hpp"

#include <algorithm>
#include <unordered_map>

#include "logictree/error.hpp"
#include "logictree/logic/closure.hpp"
#include "logictree/logic/entailment.hpp"

namespace logictree::treegen {

using logic::Formula;

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

const CheckResult* VerificationReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

// Returns an empty string when every internal node is a sound application.
std::string check_node(const TreeNode& n) {
  if (n.is_leaf()) {
    return n.children.empty() ? "" : "leaf " + std::to_string(n.node_id) + " has children";
  }
  std::vector<Formula> premises;
  int height = 0;
  for (const auto& c : n.children) {
    if (auto e = check_node(c); !e.empty()) return e;
    premises.push_back(c.conclusion);
    height = std::max(height, c.height + 1);
  }
  const auto got = logic::try_apply_rule(*n.rule, premises);
  if (!got || !(*got == n.conclusion)) {
    return "node " + std::to_string(n.node_id) + " is not " +
           std::string(logic::display_name(*n.rule)) + " of its children";
  }
  if (height != n.height) {
    return "node " + std::to_string(n.node_id) + " records height " +
           std::to_string(n.height) + ", children give " + std::to_string(height);
  }
  return "";
}

bool same_multiset(const std::vector<Formula>& a, const std::vector<Formula>& b) {
  if (a.size() != b.size()) return false;
  std::unordered_map<Formula, int, logic::FormulaHash> counts;
  for (const auto& f : a) ++counts[f];
  for (const auto& f : b) {
    if (--counts[f] < 0) return false;
  }
  return true;
}

}  // namespace

VerificationReport verify_instance(const surface::Instance& inst) {
  VerificationReport report;
  report.instance_id = inst.id;

  std::optional<logic::EntailmentOracle> oracle;
  {
    CheckResult c{std::string(kCheckSatisfiable), false, ""};
    try {
      oracle.emplace(inst.premises);
      c.passed = true;
    } catch (const InconsistencyError&) {
      c.detail = "no assignment satisfies every premise";
    } catch (const Error& e) {
      c.detail = e.what();
    }
    report.checks.push_back(std::move(c));
  }

  {
    CheckResult c{std::string(kCheckLabels), false, ""};
    if (!oracle) {
      c.detail = "skipped: premises unusable";
    } else {
      for (std::size_t i = 0; i < inst.questions.size(); ++i) {
        const auto& q = inst.questions[i];
        logic::Verdict v = logic::Verdict::kUnknown;
        try {
          v = oracle->verdict(q.formula);
        } catch (const Error&) {
        }
        if (v != q.label || v == logic::Verdict::kUnknown) {
          report.failing_questions.push_back(i);
          if (!c.detail.empty()) c.detail += "; ";
          c.detail += "question " + std::to_string(i) + ": stored " +
                      std::string(logic::to_string(q.label)) + ", oracle " +
                      std::string(logic::to_string(v));
        }
      }
      c.passed = report.failing_questions.empty() && !inst.questions.empty();
      if (inst.questions.empty()) c.detail = "no questions";
    }
    report.checks.push_back(std::move(c));
  }

  if (!inst.tree) {
    report.checks.push_back({std::string(kCheckTree), false, "instance carries no tree"});
    report.checks.push_back({std::string(kCheckDepth), false, "instance carries no tree"});
    report.checks.push_back({std::string(kCheckSkeleton), false, "instance carries no tree"});
    return report;
  }
  const ArgumentTree& tree = *inst.tree;

  {
    CheckResult c{std::string(kCheckTree), false, ""};
    std::string err = check_node(tree.root);
    for (const auto& d : tree.distractors) {
      if (err.empty()) err = check_node(d);
    }
    if (err.empty() && !same_multiset(tree.premises(), inst.premises)) {
      err = "paragraph premises differ from the tree leaves";
    }
    c.passed = err.empty();
    c.detail = err;
    report.checks.push_back(std::move(c));
  }

  {
    CheckResult c{std::string(kCheckDepth), false, ""};
    if (tree.depth() != inst.depth) {
      c.detail = "tree height " + std::to_string(tree.depth()) + " vs metadata " +
                 std::to_string(inst.depth);
    } else {
      try {
        logic::ClosureOptions opts;
        opts.stop_at = tree.root.conclusion;
        const auto closure =
            logic::forward_closure(inst.premises, std::max(1, inst.depth), opts);
        const auto d = closure.depth_of(tree.root.conclusion);
        c.passed = d.has_value() && *d == inst.depth;
        if (!c.passed) {
          c.detail = d ? "root derivable at depth " + std::to_string(*d) +
                             ", metadata says " + std::to_string(inst.depth)
                       : "root not derivable within " + std::to_string(inst.depth) +
                             " steps";
        }
      } catch (const Error& e) {
        c.detail = e.what();
      }
    }
    report.checks.push_back(std::move(c));
  }

  {
    CheckResult c{std::string(kCheckSkeleton), false, ""};
    const std::string h = skeleton_hash(tree);
    c.passed = h == inst.skeleton_hash;
    if (!c.passed) c.detail = "recomputed " + h + ", stored " + inst.skeleton_hash;
    report.checks.push_back(std::move(c));
  }
  return report;
}

}  // namespace logictree::treegen
