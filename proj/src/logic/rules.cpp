#include "logictree/logic/rules.hpp"

#include <string>

#include "logictree/error.hpp"

namespace logictree::logic {

std::size_t arity(InferenceRule r) {
  switch (r) {
    case InferenceRule::kConstructiveDilemma:
    case InferenceRule::kDisjunctionElimination:
      return 3;
    default:
      return 2;
  }
}

std::string_view display_name(InferenceRule r) {
  switch (r) {
    case InferenceRule::kModusPonens:
      return "Modus Ponens";
    case InferenceRule::kModusTollens:
      return "Modus Tollens";
    case InferenceRule::kHypotheticalSyllogism:
      return "Hypothetical Syllogism";
    case InferenceRule::kDisjunctiveSyllogism:
      return "Disjunctive Syllogism";
    case InferenceRule::kReductioAdAbsurdum:
      return "Reductio ad Absurdum";
    case InferenceRule::kConstructiveDilemma:
      return "Constructive Dilemma";
    case InferenceRule::kDisjunctionElimination:
      return "Disjunction Elimination";
  }
  return "";
}

std::string_view wire_name(InferenceRule r) {
  switch (r) {
    case InferenceRule::kModusPonens:
      return "modus_ponens";
    case InferenceRule::kModusTollens:
      return "modus_tollens";
    case InferenceRule::kHypotheticalSyllogism:
      return "hypothetical_syllogism";
    case InferenceRule::kDisjunctiveSyllogism:
      return "disjunctive_syllogism";
    case InferenceRule::kReductioAdAbsurdum:
      return "reductio_ad_absurdum";
    case InferenceRule::kConstructiveDilemma:
      return "constructive_dilemma";
    case InferenceRule::kDisjunctionElimination:
      return "disjunction_elimination";
  }
  return "";
}

std::optional<InferenceRule> rule_from_wire(std::string_view name) {
  for (InferenceRule r : kAllRules) {
    if (wire_name(r) == name) return r;
  }
  return std::nullopt;
}

std::string_view schema_text(InferenceRule r) {
  switch (r) {
    case InferenceRule::kModusPonens:
      return "[p→q, p]";
    case InferenceRule::kModusTollens:
      return "[p→q, ¬q]";
    case InferenceRule::kHypotheticalSyllogism:
      return "[p→q, q→r]";
    case InferenceRule::kDisjunctiveSyllogism:
      return "[p∨q, ¬p]";
    case InferenceRule::kReductioAdAbsurdum:
      return "[p→q, p→¬q]";
    case InferenceRule::kConstructiveDilemma:
      return "[p→q, r→s, p∨r]";
    case InferenceRule::kDisjunctionElimination:
      return "[p∨q, p→s, q→s]";
  }
  return "";
}

std::optional<Formula> try_apply_rule(InferenceRule rule,
                                      std::span<const Formula> ps) {
  if (ps.size() != arity(rule)) return std::nullopt;
  const auto is_imp = [](const Formula& f) {
    return f.is(Connective::kImplies);
  };
  const auto is_or = [](const Formula& f) { return f.is(Connective::kOr); };
  const auto is_not = [](const Formula& f) { return f.is(Connective::kNot); };

  switch (rule) {
    case InferenceRule::kModusPonens:
      if (is_imp(ps[0]) && ps[0].antecedent() == ps[1]) {
        return ps[0].consequent();
      }
      break;
    case InferenceRule::kModusTollens:
      if (is_imp(ps[0]) && is_not(ps[1]) &&
          ps[1].child() == ps[0].consequent()) {
        return neg(ps[0].antecedent());
      }
      break;
    case InferenceRule::kHypotheticalSyllogism:
      if (is_imp(ps[0]) && is_imp(ps[1]) &&
          ps[0].consequent() == ps[1].antecedent()) {
        return imp(ps[0].antecedent(), ps[1].consequent());
      }
      break;
    case InferenceRule::kDisjunctiveSyllogism:
      if (is_or(ps[0]) && is_not(ps[1]) && ps[1].child() == ps[0].left()) {
        return ps[0].right();
      }
      break;
    case InferenceRule::kReductioAdAbsurdum:
      if (is_imp(ps[0]) && is_imp(ps[1]) &&
          ps[0].antecedent() == ps[1].antecedent() &&
          is_not(ps[1].consequent()) &&
          ps[1].consequent().child() == ps[0].consequent()) {
        return neg(ps[0].antecedent());
      }
      break;
    case InferenceRule::kConstructiveDilemma:
      if (is_imp(ps[0]) && is_imp(ps[1]) && is_or(ps[2]) &&
          ps[2].left() == ps[0].antecedent() &&
          ps[2].right() == ps[1].antecedent()) {
        return disj(ps[0].consequent(), ps[1].consequent());
      }
      break;
    case InferenceRule::kDisjunctionElimination:
      if (is_or(ps[0]) && is_imp(ps[1]) && is_imp(ps[2]) &&
          ps[1].antecedent() == ps[0].left() &&
          ps[2].antecedent() == ps[0].right() &&
          ps[1].consequent() == ps[2].consequent()) {
        return ps[1].consequent();
      }
      break;
  }
  return std::nullopt;
}

Formula apply_rule(InferenceRule rule, std::span<const Formula> premises) {
  if (auto f = try_apply_rule(rule, premises)) return *std::move(f);
  std::string got;
  for (const auto& p : premises) {
    if (!got.empty()) got += ", ";
    got += to_symbolic(p);
  }
  throw RuleApplicationError(std::string(display_name(rule)) + " expects " +
                             std::string(schema_text(rule)) + ", got [" + got +
                             "]");
}

}  // namespace logictree::logic
