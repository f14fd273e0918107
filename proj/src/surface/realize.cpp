#include "logictree/surface/realize.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "logictree/error.hpp"

namespace logictree::surface {

using logic::Connective;
using logic::Formula;

namespace {

constexpr std::array<std::string_view, 40> kFunctionWords = {
    "a",      "an",    "the",   "this",  "that",   "these",     "those",
    "some",   "many",  "most",  "all",   "every",  "each",      "both",
    "either", "no",    "one",   "it",    "there",  "we",        "our",
    "his",    "her",   "their", "its",   "if",     "when",      "whenever",
    "in",     "on",    "at",    "as",    "given",  "provided",  "assuming",
    "should", "not",   "only",  "nobody", "sometimes"};

bool starts_with_function_word(std::string_view s) {
  const auto end = s.find_first_of(" ,;:'");
  std::string word(s.substr(0, end));
  std::transform(word.begin(), word.end(), word.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return std::find(kFunctionWords.begin(), kFunctionWords.end(), word) !=
         kFunctionWords.end();
}

}  // namespace

std::string as_clause(std::string_view sentence) {
  std::string out(sentence);
  while (!out.empty() && (out.back() == '.' || out.back() == ' ')) out.pop_back();
  if (!out.empty() && std::isupper(static_cast<unsigned char>(out[0])) &&
      starts_with_function_word(out)) {
    out[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[0])));
  }
  return out;
}

std::string as_sentence(std::string_view clause) {
  std::string out(clause);
  if (!out.empty()) {
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  }
  if (out.empty() || (out.back() != '.' && out.back() != '!')) out += '.';
  return out;
}

const std::string& Realizer::pick(const std::vector<std::string>& list) {
  return list[static_cast<std::size_t>(rng_.below(list.size()))];
}

std::string Realizer::clause(const Formula& f, const AtomSurface& atoms) {
  if (f.is(Connective::kAtom)) {
    auto it = atoms.find(f.atom_id());
    if (it == atoms.end()) {
      throw PreconditionError("no surface text for atom " +
                              std::to_string(f.atom_id().value));
    }
    return as_clause(it->second);
  }
  return as_clause(compound(f, atoms));
}

std::string Realizer::compound(const Formula& f, const AtomSurface& atoms) {
  switch (f.kind()) {
    case Connective::kNot:
      return fill_template(pick(pool_.of(Construct::kNegation)),
                           {{'S', clause(f.child(), atoms)}});
    case Connective::kAnd:
    case Connective::kOr:
    case Connective::kImplies: {
      const Construct c = f.is(Connective::kAnd)  ? Construct::kConjunction
                          : f.is(Connective::kOr) ? Construct::kDisjunction
                                                  : Construct::kImplication;
      const std::string& t = pick(pool_.of(c));
      std::string p = clause(f.left(), atoms);
      std::string q = clause(f.right(), atoms);
      return fill_template(t, {{'P', std::move(p)}, {'Q', std::move(q)}});
    }
    case Connective::kAtom:
      break;
  }
  throw InternalError("compound() on an atom");
}

std::string Realizer::sentence(const Formula& f, const AtomSurface& atoms) {
  if (f.is(Connective::kAtom)) {
    auto it = atoms.find(f.atom_id());
    if (it == atoms.end()) {
      throw PreconditionError("no surface text for atom " +
                              std::to_string(f.atom_id().value));
    }
    return it->second;
  }
  return as_sentence(compound(f, atoms));
}

std::string Realizer::premise(const Formula& f, const AtomSurface& atoms) {
  if (!f.is(Connective::kAtom)) return sentence(f, atoms);
  return as_sentence(
      fill_template(pick(pool_.of(Construct::kStatement)), {{'S', clause(f, atoms)}}));
}

std::string Realizer::proof_step(logic::InferenceRule rule,
                                 const std::vector<Formula>& premises,
                                 const Formula& conclusion,
                                 const AtomSurface& atoms) {
  std::string joined;
  for (std::size_t i = 0; i < premises.size(); ++i) {
    if (i) joined += i + 1 == premises.size() ? " and " : "; ";
    joined += "'" + clause(premises[i], atoms) + "'";
  }
  return as_sentence(fill_template(
      pick(pool_.of(rule)),
      {{'P', std::move(joined)}, {'Q', "'" + clause(conclusion, atoms) + "'"}}));
}

std::string realize(const Formula& f, const AtomSurface& atoms,
                    const TemplatePool& pool, std::uint64_t seed) {
  Realizer r(pool, seed);
  return r.sentence(f, atoms);
}

}  // namespace logictree::surface
