#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "logictree/logic/formula.hpp"

namespace logictree::logic {

// The seven deductive paradigms. Premise order is part of each schema:
//   ModusPonens             [p→q, p]            ⊢ q
//   ModusTollens            [p→q, ¬q]           ⊢ ¬p
//   HypotheticalSyllogism   [p→q, q→r]          ⊢ p→r
//   DisjunctiveSyllogism    [p∨q, ¬p]           ⊢ q
//   ReductioAdAbsurdum      [p→q, p→¬q]         ⊢ ¬p
//   ConstructiveDilemma     [p→q, r→s, p∨r]     ⊢ q∨s
//   DisjunctionElimination  [p∨q, p→s, q→s]     ⊢ s
enum class InferenceRule : std::uint8_t {
  kModusPonens,
  kModusTollens,
  kHypotheticalSyllogism,
  kDisjunctiveSyllogism,
  kReductioAdAbsurdum,
  kConstructiveDilemma,
  kDisjunctionElimination,
};

inline constexpr std::array<InferenceRule, 7> kAllRules = {
    InferenceRule::kModusPonens,           InferenceRule::kModusTollens,
    InferenceRule::kHypotheticalSyllogism, InferenceRule::kDisjunctiveSyllogism,
    InferenceRule::kReductioAdAbsurdum,    InferenceRule::kConstructiveDilemma,
    InferenceRule::kDisjunctionElimination,
};

std::size_t arity(InferenceRule r);

// "Modus Ponens", "Reductio ad Absurdum", ...
std::string_view display_name(InferenceRule r);
// "modus_ponens", ... (wire form)
std::string_view wire_name(InferenceRule r);
std::optional<InferenceRule> rule_from_wire(std::string_view name);

// Human description of the premise shape, used in error messages.
std::string_view schema_text(InferenceRule r);

// Structural match only: p∨q does not match q∨p. Throws RuleApplicationError
// naming the expected shape on mismatch.
Formula apply_rule(InferenceRule rule, std::span<const Formula> premises);

// Non-throwing variant.
std::optional<Formula> try_apply_rule(InferenceRule rule,
                                      std::span<const Formula> premises);

}  // namespace logictree::logic
