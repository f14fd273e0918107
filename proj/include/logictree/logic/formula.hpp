#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace logictree::logic {

struct AtomId {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(AtomId, AtomId) = default;
};

enum class Connective : std::uint8_t { kAtom, kNot, kAnd, kOr, kImplies };

// Immutable propositional formula. Nodes are shared between copies, so a
// Formula is cheap to copy and safe to read from any thread. Equality is
// structural; the hash is computed once at construction.
class Formula {
 public:
  // The atom A:0. Exists so aggregates holding a Formula stay regular.
  Formula();

  static Formula atom(AtomId id);
  static Formula negation(Formula child);
  static Formula conjunction(Formula left, Formula right);
  static Formula disjunction(Formula left, Formula right);
  static Formula implication(Formula antecedent, Formula consequent);

  Connective kind() const noexcept;
  bool is(Connective c) const noexcept { return kind() == c; }

  // Only valid for kAtom.
  AtomId atom_id() const;
  // Only valid for kNot.
  const Formula& child() const;
  // Binary connectives. For kImplies left is the antecedent.
  const Formula& left() const;
  const Formula& right() const;
  const Formula& antecedent() const { return left(); }
  const Formula& consequent() const { return right(); }

  std::size_t hash() const noexcept;
  // Node count.
  std::size_t size() const noexcept;

  friend bool operator==(const Formula& a, const Formula& b) noexcept;

 private:
  struct Node;
  struct Unset {};
  explicit Formula(Unset) {}
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

// Short constructors for building formulas in code and tests.
inline Formula atom(std::uint32_t id) { return Formula::atom(AtomId{id}); }
inline Formula neg(Formula f) { return Formula::negation(std::move(f)); }
inline Formula conj(Formula a, Formula b) {
  return Formula::conjunction(std::move(a), std::move(b));
}
inline Formula disj(Formula a, Formula b) {
  return Formula::disjunction(std::move(a), std::move(b));
}
inline Formula imp(Formula a, Formula b) {
  return Formula::implication(std::move(a), std::move(b));
}

struct FormulaHash {
  std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

// Sorted, deduplicated.
std::vector<AtomId> atoms(const Formula& f);
std::vector<AtomId> atoms(const std::vector<Formula>& fs);

using Assignment = std::map<AtomId, bool>;

// Throws PreconditionError when `a` misses an atom of `f`.
bool eval(const Formula& f, const Assignment& a);

// Dataset wire form: A:<id>, (NOT f), (AND f g), (OR f g), (IMP f g).
std::string to_text(const Formula& f);
// Throws ParseError on malformed input.
Formula parse_formula(std::string_view text);

// Human-oriented rendering with logical symbols, for reports and logs.
std::string to_symbolic(const Formula& f);

inline std::ostream& operator<<(std::ostream& os, const Formula& f) {
  return os << to_symbolic(f);
}

}  // namespace logictree::logic

template <>
struct std::hash<logictree::logic::Formula> {
  std::size_t operator()(const logictree::logic::Formula& f) const noexcept {
    return f.hash();
  }
};
