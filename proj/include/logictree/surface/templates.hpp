#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "logictree/logic/rules.hpp"

namespace logictree::surface {

enum class Construct : std::uint8_t {
  kStatement,
  kNegation,
  kConjunction,
  kImplication,
  kDisjunction,
};

inline constexpr std::array<Construct, 5> kAllConstructs = {
    Construct::kStatement, Construct::kNegation, Construct::kConjunction,
    Construct::kImplication, Construct::kDisjunction};

// "Statement", "Negation", ... as keyed in the template document.
std::string_view construct_name(Construct c);

// Per-construct templates use {S} (unary) or {P} and {Q} (binary). Rule
// paraphrases use {P} for the joined premises and {Q} for the conclusion.
struct TemplatePool {
  std::map<Construct, std::vector<std::string>> constructs;
  std::map<logic::InferenceRule, std::vector<std::string>> rules;

  const std::vector<std::string>& of(Construct c) const;
  const std::vector<std::string>& of(logic::InferenceRule r) const;
};

inline constexpr std::size_t kMinTemplatesPerConstruct = 10;

// ValidationError when a construct has fewer than ten templates or a template
// lacks the slots its construct needs.
TemplatePool parse_template_pool(std::string_view json_text);
TemplatePool load_template_pool(const std::filesystem::path& path);

// Fills {S}/{P}/{Q}. Unknown or unfilled slots are a ValidationError.
std::string fill_template(std::string_view tmpl, const std::map<char, std::string>& slots);

// Location of the shipped data files (facts.tsv, expressions.json).
std::filesystem::path default_data_dir();

}  // namespace logictree::surface
