#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "logictree/logic/formula.hpp"
#include "logictree/rng.hpp"
#include "logictree/surface/templates.hpp"

namespace logictree::surface {

using AtomSurface = std::map<logic::AtomId, std::string>;

// Recursive template substitution. Nested clauses lose their final period and,
// when they open with a common function word, their capital letter; the outer
// sentence is capitalised and closed with a period. Grouping is carried by the
// template wording, never by brackets.
class Realizer {
 public:
  Realizer(const TemplatePool& pool, std::uint64_t seed)
      : pool_(pool), rng_(seed) {}

  // A standalone sentence. An atom comes back exactly as its surface text.
  std::string sentence(const logic::Formula& f, const AtomSurface& atoms);
  // Like sentence(), but an atom is wrapped in a Statement template, which is
  // how atomic premises appear in paragraphs.
  std::string premise(const logic::Formula& f, const AtomSurface& atoms);
  // One line of a worked solution: a rule paraphrase over realised premises.
  std::string proof_step(logic::InferenceRule rule,
                         const std::vector<logic::Formula>& premises,
                         const logic::Formula& conclusion,
                         const AtomSurface& atoms);

 private:
  std::string clause(const logic::Formula& f, const AtomSurface& atoms);
  std::string compound(const logic::Formula& f, const AtomSurface& atoms);
  const std::string& pick(const std::vector<std::string>& list);

  const TemplatePool& pool_;
  Rng rng_;
};

// PreconditionError when `atoms` misses an atom of `f`.
std::string realize(const logic::Formula& f, const AtomSurface& atoms,
                    const TemplatePool& pool, std::uint64_t seed);

// Helpers shared with the prompt and instance code.
std::string as_clause(std::string_view sentence);
std::string as_sentence(std::string_view clause);

}  // namespace logictree::surface
