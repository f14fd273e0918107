#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logictree/surface/fact_pool.hpp"
#include "logictree/surface/templates.hpp"
#include "logictree/treegen/generator.hpp"

namespace logictree::surface {

inline constexpr std::string_view kInstanceSchema = "logictree.instance/1";

using logic::Formula;
using logic::Verdict;

struct QuestionRecord {
  std::string text;
  Formula formula;
  Verdict label = Verdict::kTrue;
  treegen::QuestionKind kind = treegen::QuestionKind::kRoot;
  int node_id = 0;
  treegen::Polarity polarity = treegen::Polarity::kAsserted;

  bool operator==(const QuestionRecord&) const = default;
};

struct AtomBinding {
  std::uint32_t atom = 0;
  std::string fact_id;
  std::string text;

  bool operator==(const AtomBinding&) const = default;
};

struct Instance {
  std::string id;
  int group_id = 0;
  int variant_idx = 0;
  int depth = 0;
  int width = 0;
  std::uint64_t seed = 0;
  std::string paragraph;
  // Paragraph order.
  std::vector<Formula> premises;
  std::vector<std::string> premise_texts;
  std::vector<QuestionRecord> questions;
  std::string skeleton_hash;
  std::vector<AtomBinding> atoms;
  // The full derivation, hidden nodes included. Optional on input so that
  // externally produced files without it still load.
  std::optional<treegen::ArgumentTree> tree;
  // Worked solution, one rule application per line, leaves to root.
  std::vector<std::string> proof;

  std::vector<Verdict> gold() const;

  bool operator==(const Instance&) const = default;
};

std::string instance_id(int depth, int group_id, int variant_idx);

// Lexicalises one abstract variant: binds atoms to facts, realises premises
// (shuffled by the variant seed), questions and the worked solution.
Instance instantiate(const treegen::AbstractInstance& abstract, int group_id,
                     const treegen::DifficultyProfile& profile,
                     const FactPool& pool, const TemplatePool& templates);

// One JSON object, no trailing newline. Key order is fixed.
std::string to_json_line(const Instance& instance);
// ParseError on malformed JSON or a missing field.
Instance instance_from_json(std::string_view line);

// Line-delimited files; ParseError messages carry the line number.
std::vector<Instance> read_instances(const std::filesystem::path& path);

}  // namespace logictree::surface
