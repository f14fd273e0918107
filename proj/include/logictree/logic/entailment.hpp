#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "logictree/logic/formula.hpp"

namespace logictree::logic {

enum class Verdict : std::uint8_t { kTrue, kFalse, kUnknown };

std::string_view to_string(Verdict v);

inline constexpr std::size_t kDefaultAtomCap = 24;

// Exhaustive truth-table entailment. True when every model of the premises
// satisfies the statement, False when every model falsifies it, Unknown
// otherwise. Throws CapacityError above `atom_cap` atoms and
// InconsistencyError when the premises have no model.
Verdict entails(std::span<const Formula> premises, const Formula& statement,
                std::size_t atom_cap = kDefaultAtomCap);

bool satisfiable(std::span<const Formula> premises,
                 std::size_t atom_cap = kDefaultAtomCap);

// Enumerates the premise models once and answers many statements against
// them. Statements that mention atoms outside the premises fall back to a
// full enumeration over the union.
class EntailmentOracle {
 public:
  explicit EntailmentOracle(std::vector<Formula> premises,
                            std::size_t atom_cap = kDefaultAtomCap);

  Verdict verdict(const Formula& statement) const;

  std::size_t atom_count() const noexcept { return atoms_.size(); }
  const std::vector<Formula>& premises() const noexcept { return premises_; }

 private:
  std::vector<Formula> premises_;
  std::vector<AtomId> atoms_;
  std::size_t atom_cap_;
  // Bit r of models_[r / 64] is set when row r satisfies every premise.
  std::vector<std::uint64_t> models_;
};

}  // namespace logictree::logic
