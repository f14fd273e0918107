#include "logictree/logic/formula.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "logictree/error.hpp"
#include "logictree/rng.hpp"

namespace logictree::logic {

struct Formula::Node {
  Connective kind;
  AtomId atom;
  Formula a{Unset{}};
  Formula b{Unset{}};
  std::size_t hash;
  std::size_t size;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return static_cast<std::size_t>(splitmix64(h ^ (v + 0x9e3779b97f4a7c15ULL)));
}

}  // namespace

Formula::Formula() {
  static const Formula zero = atom(AtomId{0});
  node_ = zero.node_;
}

Formula Formula::atom(AtomId id) {
  auto n = std::make_shared<Node>();
  n->kind = Connective::kAtom;
  n->atom = id;
  n->hash = mix(0x41, id.value);
  n->size = 1;
  return Formula(std::move(n));
}

Formula Formula::negation(Formula child) {
  auto n = std::make_shared<Node>();
  n->kind = Connective::kNot;
  n->hash = mix(0x4e, child.hash());
  n->size = 1 + child.size();
  n->a = std::move(child);
  return Formula(std::move(n));
}

namespace {

template <typename NodeT>
std::shared_ptr<NodeT> binary(Connective kind, std::size_t lh, std::size_t rh,
                              std::size_t ls, std::size_t rs) {
  auto n = std::make_shared<NodeT>();
  n->kind = kind;
  n->hash = mix(mix(static_cast<std::size_t>(kind) * 0x1000193, lh), rh);
  n->size = 1 + ls + rs;
  return n;
}

}  // namespace

Formula Formula::conjunction(Formula left, Formula right) {
  auto n = binary<Node>(Connective::kAnd, left.hash(), right.hash(),
                        left.size(), right.size());
  n->a = std::move(left);
  n->b = std::move(right);
  return Formula(std::move(n));
}

Formula Formula::disjunction(Formula left, Formula right) {
  auto n = binary<Node>(Connective::kOr, left.hash(), right.hash(),
                        left.size(), right.size());
  n->a = std::move(left);
  n->b = std::move(right);
  return Formula(std::move(n));
}

Formula Formula::implication(Formula antecedent, Formula consequent) {
  auto n = binary<Node>(Connective::kImplies, antecedent.hash(),
                        consequent.hash(), antecedent.size(),
                        consequent.size());
  n->a = std::move(antecedent);
  n->b = std::move(consequent);
  return Formula(std::move(n));
}

Connective Formula::kind() const noexcept { return node_->kind; }

AtomId Formula::atom_id() const {
  if (node_->kind != Connective::kAtom) {
    throw PreconditionError("atom_id() on a non-atom formula");
  }
  return node_->atom;
}

const Formula& Formula::child() const {
  if (node_->kind != Connective::kNot) {
    throw PreconditionError("child() on a non-negation formula");
  }
  return node_->a;
}

const Formula& Formula::left() const {
  if (node_->kind == Connective::kAtom || node_->kind == Connective::kNot) {
    throw PreconditionError("left() on a non-binary formula");
  }
  return node_->a;
}

const Formula& Formula::right() const {
  if (node_->kind == Connective::kAtom || node_->kind == Connective::kNot) {
    throw PreconditionError("right() on a non-binary formula");
  }
  return node_->b;
}

std::size_t Formula::hash() const noexcept { return node_->hash; }
std::size_t Formula::size() const noexcept { return node_->size; }

bool operator==(const Formula& a, const Formula& b) noexcept {
  const Formula::Node* x = a.node_.get();
  const Formula::Node* y = b.node_.get();
  if (x == y) return true;
  if (x->hash != y->hash || x->size != y->size || x->kind != y->kind) {
    return false;
  }
  switch (x->kind) {
    case Connective::kAtom:
      return x->atom == y->atom;
    case Connective::kNot:
      return x->a == y->a;
    default:
      return x->a == y->a && x->b == y->b;
  }
}

namespace {

void collect_atoms(const Formula& f, std::vector<AtomId>& out) {
  switch (f.kind()) {
    case Connective::kAtom:
      out.push_back(f.atom_id());
      return;
    case Connective::kNot:
      collect_atoms(f.child(), out);
      return;
    default:
      collect_atoms(f.left(), out);
      collect_atoms(f.right(), out);
  }
}

void sort_unique(std::vector<AtomId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::vector<AtomId> atoms(const Formula& f) {
  std::vector<AtomId> out;
  collect_atoms(f, out);
  sort_unique(out);
  return out;
}

std::vector<AtomId> atoms(const std::vector<Formula>& fs) {
  std::vector<AtomId> out;
  for (const auto& f : fs) collect_atoms(f, out);
  sort_unique(out);
  return out;
}

bool eval(const Formula& f, const Assignment& a) {
  switch (f.kind()) {
    case Connective::kAtom: {
      auto it = a.find(f.atom_id());
      if (it == a.end()) {
        throw PreconditionError("assignment has no value for atom A:" +
                                std::to_string(f.atom_id().value));
      }
      return it->second;
    }
    case Connective::kNot:
      return !eval(f.child(), a);
    case Connective::kAnd:
      return eval(f.left(), a) && eval(f.right(), a);
    case Connective::kOr:
      return eval(f.left(), a) || eval(f.right(), a);
    case Connective::kImplies:
      return !eval(f.left(), a) || eval(f.right(), a);
  }
  return false;
}

namespace {

void write_text(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Connective::kAtom:
      out += "A:";
      out += std::to_string(f.atom_id().value);
      return;
    case Connective::kNot:
      out += "(NOT ";
      write_text(f.child(), out);
      out += ')';
      return;
    case Connective::kAnd:
      out += "(AND ";
      break;
    case Connective::kOr:
      out += "(OR ";
      break;
    case Connective::kImplies:
      out += "(IMP ";
      break;
  }
  write_text(f.left(), out);
  out += ' ';
  write_text(f.right(), out);
  out += ')';
}

class TextParser {
 public:
  explicit TextParser(std::string_view s) : s_(s) {}

  Formula parse() {
    Formula f = formula();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("formula: " + why + " at offset " + std::to_string(pos_) +
                     " in '" + std::string(s_) + "'");
  }

  void skip_ws() {
    while (pos_ < s_.size() &&
           std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
  }

  std::string_view word() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != '(' && s_[pos_] != ')' &&
           !std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
    return s_.substr(start, pos_ - start);
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) {
      fail(std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  Formula formula() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (s_[pos_] != '(') {
      const std::string_view w = word();
      if (w.size() < 3 || w.substr(0, 2) != "A:") fail("expected atom A:<id>");
      std::uint32_t id = 0;
      const auto digits = w.substr(2);
      auto [p, ec] = std::from_chars(digits.data(),
                                     digits.data() + digits.size(), id);
      if (ec != std::errc{} || p != digits.data() + digits.size()) {
        fail("bad atom id");
      }
      return atom(id);
    }
    ++pos_;
    const std::string_view op = word();
    Formula result = [&] {
      if (op == "NOT") return neg(formula());
      Formula l = formula();
      Formula r = formula();
      if (op == "AND") return conj(std::move(l), std::move(r));
      if (op == "OR") return disj(std::move(l), std::move(r));
      if (op == "IMP") return imp(std::move(l), std::move(r));
      fail("unknown connective '" + std::string(op) + "'");
    }();
    expect(')');
    return result;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

void write_symbolic(const Formula& f, std::string& out, bool top) {
  switch (f.kind()) {
    case Connective::kAtom:
      out += 'p';
      out += std::to_string(f.atom_id().value);
      return;
    case Connective::kNot:
      out += "¬";
      write_symbolic(f.child(), out, false);
      return;
    default:
      break;
  }
  const char* op = f.is(Connective::kAnd)  ? " ∧ "
                   : f.is(Connective::kOr) ? " ∨ "
                                           : " → ";
  if (!top) out += '(';
  write_symbolic(f.left(), out, false);
  out += op;
  write_symbolic(f.right(), out, false);
  if (!top) out += ')';
}

}  // namespace

std::string to_text(const Formula& f) {
  std::string out;
  write_text(f, out);
  return out;
}

Formula parse_formula(std::string_view text) { return TextParser(text).parse(); }

std::string to_symbolic(const Formula& f) {
  std::string out;
  write_symbolic(f, out, true);
  return out;
}

}  // namespace logictree::logic
