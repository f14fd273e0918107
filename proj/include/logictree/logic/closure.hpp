#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "logictree/logic/formula.hpp"
#include "logictree/logic/rules.hpp"

namespace logictree::logic {

// How a formula entered the closure. Premises have depth 0 and no rule.
struct Derivation {
  std::optional<InferenceRule> rule;
  std::vector<Formula> premises;
  int depth = 0;
};

struct ClosureOptions {
  // Hard cap on stored formulas; exceeding it truncates the closure.
  std::size_t max_formulas = 50000;
  // Stop after the round in which this formula first appears.
  std::optional<Formula> stop_at;
};

// Breadth-first closure under the seven rules. A formula first derived in
// round k has minimal derivation depth k, where a derivation's depth is one
// more than the deepest premise it uses.
struct Closure {
  std::unordered_map<Formula, Derivation, FormulaHash> facts;
  // Formulas in the order they were added (premises first, then per round).
  std::vector<Formula> order;
  int rounds = 0;
  bool saturated = false;
  bool truncated = false;

  bool contains(const Formula& f) const { return facts.count(f) != 0; }
  std::optional<int> depth_of(const Formula& f) const;
  const Derivation* derivation(const Formula& f) const;
};

// Runs at most `max_steps` rounds (>= 1). `truncated` is set when the budget
// or the formula cap ran out before a fixpoint was reached.
Closure forward_closure(std::span<const Formula> premises, int max_steps,
                        const ClosureOptions& options = {});

}  // namespace logictree::logic
