#include "logictree/logic/closure.hpp"

#include <initializer_list>
#include <unordered_set>

#include "logictree/error.hpp"

namespace logictree::logic {

std::optional<int> Closure::depth_of(const Formula& f) const {
  auto it = facts.find(f);
  if (it == facts.end()) return std::nullopt;
  return it->second.depth;
}

const Derivation* Closure::derivation(const Formula& f) const {
  auto it = facts.find(f);
  return it == facts.end() ? nullptr : &it->second;
}

namespace {

// Semi-naive evaluation: in round k only rule instances that use at least one
// formula first derived in round k-1 can produce anything new.
class Engine {
 public:
  Engine(Closure& out, const ClosureOptions& options)
      : out_(out), options_(options) {}

  void seed(std::span<const Formula> premises) {
    for (const auto& p : premises) {
      if (index_.count(p)) continue;
      commit(p, Derivation{std::nullopt, {}, 0});
    }
  }

  // Returns false when nothing new was derived.
  bool round(int k) {
    k_ = k;
    pending_.clear();
    pending_set_.clear();

    for (std::size_t i : implications_) {
      const Formula& x = entries_[i].f;
      const Formula& a = x.antecedent();
      const Formula& b = x.consequent();
      if (auto it = index_.find(a); it != index_.end()) {
        propose(InferenceRule::kModusPonens, {i, it->second}, [&] { return b; });
      }
      if (auto it = negation_of_.find(b); it != negation_of_.end()) {
        propose(InferenceRule::kModusTollens, {i, it->second},
                [&] { return neg(a); });
      }
      if (auto it = by_antecedent_.find(b); it != by_antecedent_.end()) {
        for (std::size_t j : it->second) {
          propose(InferenceRule::kHypotheticalSyllogism, {i, j},
                  [&] { return imp(a, entries_[j].f.consequent()); });
        }
      }
      if (auto it = by_antecedent_.find(a); it != by_antecedent_.end()) {
        for (std::size_t j : it->second) {
          const Formula& c = entries_[j].f.consequent();
          if (c.is(Connective::kNot) && c.child() == b) {
            propose(InferenceRule::kReductioAdAbsurdum, {i, j},
                    [&] { return neg(a); });
          }
        }
      }
      if (overflow_) return false;
    }

    for (std::size_t i : disjunctions_) {
      const Formula& d = entries_[i].f;
      const Formula& p = d.left();
      const Formula& q = d.right();
      if (auto it = negation_of_.find(p); it != negation_of_.end()) {
        propose(InferenceRule::kDisjunctiveSyllogism, {i, it->second},
                [&] { return q; });
      }
      auto from_p = by_antecedent_.find(p);
      auto from_q = by_antecedent_.find(q);
      if (from_p != by_antecedent_.end() && from_q != by_antecedent_.end()) {
        for (std::size_t x : from_p->second) {
          for (std::size_t y : from_q->second) {
            const Formula& cx = entries_[x].f.consequent();
            const Formula& cy = entries_[y].f.consequent();
            propose(InferenceRule::kConstructiveDilemma, {x, y, i},
                    [&] { return disj(cx, cy); });
            if (cx == cy) {
              propose(InferenceRule::kDisjunctionElimination, {i, x, y},
                      [&] { return cx; });
            }
          }
        }
      }
      if (overflow_) return false;
    }

    if (pending_.empty()) return false;
    for (auto& [f, d] : pending_) commit(std::move(f), std::move(d));
    return true;
  }

  bool overflow() const { return overflow_; }

 private:
  struct Entry {
    Formula f;
    int depth;
  };

  template <typename Make>
  void propose(InferenceRule rule, std::initializer_list<std::size_t> premises,
               Make make) {
    bool uses_frontier = false;
    for (std::size_t p : premises) {
      if (entries_[p].depth == k_ - 1) uses_frontier = true;
    }
    if (!uses_frontier || overflow_) return;
    Formula f = make();
    if (index_.count(f) || pending_set_.count(f)) return;
    if (entries_.size() + pending_.size() >= options_.max_formulas) {
      overflow_ = true;
      return;
    }
    Derivation d{rule, {}, k_};
    d.premises.reserve(premises.size());
    for (std::size_t p : premises) d.premises.push_back(entries_[p].f);
    pending_set_.insert(f);
    pending_.emplace_back(std::move(f), std::move(d));
  }

  void commit(Formula f, Derivation d) {
    const std::size_t i = entries_.size();
    entries_.push_back({f, d.depth});
    index_.emplace(f, i);
    switch (f.kind()) {
      case Connective::kImplies:
        implications_.push_back(i);
        by_antecedent_[f.antecedent()].push_back(i);
        break;
      case Connective::kOr:
        disjunctions_.push_back(i);
        break;
      case Connective::kNot:
        negation_of_.emplace(f.child(), i);
        break;
      default:
        break;
    }
    out_.order.push_back(f);
    out_.facts.emplace(std::move(f), std::move(d));
  }

  Closure& out_;
  const ClosureOptions& options_;
  int k_ = 0;
  bool overflow_ = false;
  std::vector<Entry> entries_;
  std::unordered_map<Formula, std::size_t, FormulaHash> index_;
  std::vector<std::size_t> implications_;
  std::vector<std::size_t> disjunctions_;
  std::unordered_map<Formula, std::vector<std::size_t>, FormulaHash>
      by_antecedent_;
  std::unordered_map<Formula, std::size_t, FormulaHash> negation_of_;
  std::vector<std::pair<Formula, Derivation>> pending_;
  std::unordered_set<Formula, FormulaHash> pending_set_;
};

}  // namespace

Closure forward_closure(std::span<const Formula> premises, int max_steps,
                        const ClosureOptions& options) {
  if (max_steps < 1) {
    throw PreconditionError("forward_closure: max_steps must be >= 1");
  }
  Closure out;
  Engine engine(out, options);
  engine.seed(premises);
  if (options.stop_at && out.contains(*options.stop_at)) return out;

  for (int k = 1; k <= max_steps; ++k) {
    const bool grew = engine.round(k);
    if (engine.overflow()) {
      out.truncated = true;
      return out;
    }
    if (!grew) {
      out.saturated = true;
      return out;
    }
    out.rounds = k;
    if (options.stop_at && out.contains(*options.stop_at)) return out;
  }
  out.truncated = true;
  return out;
}

}  // namespace logictree::logic
