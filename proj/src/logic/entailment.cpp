#include "logictree/logic/entailment.hpp"

#include <algorithm>

#include "logictree/error.hpp"

namespace logictree::logic {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kTrue:
      return "True";
    case Verdict::kFalse:
      return "False";
    case Verdict::kUnknown:
      return "Unknown";
  }
  return "Unknown";
}

namespace {

// Rows are enumerated 64 at a time: bit b of a block word is row 64*block+b,
// and atom slot j takes bit j of the row number.
constexpr std::uint64_t kLowSlotPattern[6] = {
    0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
    0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
};

struct Op {
  Connective kind;
  std::uint32_t slot = 0;
};

using Program = std::vector<Op>;

class TruthTable {
 public:
  TruthTable(std::vector<AtomId> atoms, std::size_t cap)
      : atoms_(std::move(atoms)) {
    if (atoms_.size() > cap) {
      throw CapacityError("truth table needs " + std::to_string(atoms_.size()) +
                          " atoms, cap is " + std::to_string(cap));
    }
    const std::size_t n = atoms_.size();
    blocks_ = n <= 6 ? 1 : (std::uint64_t{1} << (n - 6));
    valid_ = n >= 6 ? ~std::uint64_t{0}
                    : (std::uint64_t{1} << (std::uint64_t{1} << n)) - 1;
  }

  std::uint64_t blocks() const { return blocks_; }
  std::uint64_t valid_mask() const { return valid_; }

  Program compile(const Formula& f) const {
    Program p;
    p.reserve(f.size());
    emit(f, p);
    return p;
  }

  std::uint64_t run(const Program& p, std::uint64_t block,
                    std::vector<std::uint64_t>& stack) const {
    stack.clear();
    for (const Op& op : p) {
      switch (op.kind) {
        case Connective::kAtom:
          stack.push_back(op.slot < 6 ? kLowSlotPattern[op.slot]
                          : ((block >> (op.slot - 6)) & 1) ? ~std::uint64_t{0}
                                                           : 0);
          break;
        case Connective::kNot:
          stack.back() = ~stack.back();
          break;
        default: {
          const std::uint64_t r = stack.back();
          stack.pop_back();
          std::uint64_t& l = stack.back();
          if (op.kind == Connective::kAnd) {
            l &= r;
          } else if (op.kind == Connective::kOr) {
            l |= r;
          } else {
            l = ~l | r;
          }
        }
      }
    }
    return stack.back();
  }

 private:
  void emit(const Formula& f, Program& p) const {
    switch (f.kind()) {
      case Connective::kAtom: {
        auto it = std::lower_bound(atoms_.begin(), atoms_.end(), f.atom_id());
        p.push_back({Connective::kAtom,
                     static_cast<std::uint32_t>(it - atoms_.begin())});
        return;
      }
      case Connective::kNot:
        emit(f.child(), p);
        p.push_back({Connective::kNot});
        return;
      default:
        emit(f.left(), p);
        emit(f.right(), p);
        p.push_back({f.kind()});
    }
  }

  std::vector<AtomId> atoms_;
  std::uint64_t blocks_ = 1;
  std::uint64_t valid_ = 0;
};

std::vector<Program> compile_all(const TruthTable& table,
                                 std::span<const Formula> fs) {
  std::vector<Program> out;
  out.reserve(fs.size());
  for (const auto& f : fs) out.push_back(table.compile(f));
  return out;
}

std::uint64_t premise_mask(const TruthTable& table,
                           const std::vector<Program>& premises,
                           std::uint64_t block,
                           std::vector<std::uint64_t>& stack) {
  std::uint64_t m = table.valid_mask();
  for (const auto& p : premises) {
    m &= table.run(p, block, stack);
    if (m == 0) break;
  }
  return m;
}

std::vector<AtomId> union_atoms(std::span<const Formula> premises,
                                const Formula* statement) {
  std::vector<Formula> all(premises.begin(), premises.end());
  if (statement) all.push_back(*statement);
  return atoms(all);
}

}  // namespace

Verdict entails(std::span<const Formula> premises, const Formula& statement,
                std::size_t atom_cap) {
  TruthTable table(union_atoms(premises, &statement), atom_cap);
  const auto programs = compile_all(table, premises);
  const Program target = table.compile(statement);
  std::vector<std::uint64_t> stack;
  stack.reserve(64);

  bool any_model = false;
  bool seen_true = false;
  bool seen_false = false;
  for (std::uint64_t b = 0; b < table.blocks(); ++b) {
    const std::uint64_t m = premise_mask(table, programs, b, stack);
    if (m == 0) continue;
    any_model = true;
    const std::uint64_t s = table.run(target, b, stack);
    seen_true = seen_true || (m & s) != 0;
    seen_false = seen_false || (m & ~s) != 0;
    if (seen_true && seen_false) return Verdict::kUnknown;
  }
  if (!any_model) {
    throw InconsistencyError("premises are unsatisfiable");
  }
  return seen_false ? Verdict::kFalse : Verdict::kTrue;
}

bool satisfiable(std::span<const Formula> premises, std::size_t atom_cap) {
  TruthTable table(union_atoms(premises, nullptr), atom_cap);
  const auto programs = compile_all(table, premises);
  std::vector<std::uint64_t> stack;
  for (std::uint64_t b = 0; b < table.blocks(); ++b) {
    if (premise_mask(table, programs, b, stack) != 0) return true;
  }
  return false;
}

EntailmentOracle::EntailmentOracle(std::vector<Formula> premises,
                                   std::size_t atom_cap)
    : premises_(std::move(premises)),
      atoms_(logic::atoms(premises_)),
      atom_cap_(atom_cap) {
  TruthTable table(atoms_, atom_cap_);
  const auto programs = compile_all(table, premises_);
  std::vector<std::uint64_t> stack;
  models_.resize(table.blocks());
  bool any = false;
  for (std::uint64_t b = 0; b < table.blocks(); ++b) {
    models_[b] = premise_mask(table, programs, b, stack);
    any = any || models_[b] != 0;
  }
  if (!any) {
    throw InconsistencyError("premises are unsatisfiable");
  }
}

Verdict EntailmentOracle::verdict(const Formula& statement) const {
  const auto needed = atoms(statement);
  if (!std::includes(atoms_.begin(), atoms_.end(), needed.begin(),
                     needed.end())) {
    return entails(premises_, statement, atom_cap_);
  }
  TruthTable table(atoms_, atom_cap_);
  const Program target = table.compile(statement);
  std::vector<std::uint64_t> stack;
  stack.reserve(64);
  bool seen_true = false;
  bool seen_false = false;
  for (std::uint64_t b = 0; b < models_.size(); ++b) {
    const std::uint64_t m = models_[b];
    if (m == 0) continue;
    const std::uint64_t s = table.run(target, b, stack);
    seen_true = seen_true || (m & s) != 0;
    seen_false = seen_false || (m & ~s) != 0;
    if (seen_true && seen_false) return Verdict::kUnknown;
  }
  return seen_false ? Verdict::kFalse : Verdict::kTrue;
}

}  // namespace logictree::logic
