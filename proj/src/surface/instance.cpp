#include "logictree/surface/instance.hpp"

#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "logictree/error.hpp"
#include "logictree/rng.hpp"
#include "logictree/surface/realize.hpp"

namespace logictree::surface {

using nlohmann::ordered_json;
using treegen::ArgumentTree;
using treegen::Polarity;
using treegen::QuestionKind;
using treegen::TreeNode;

namespace {

std::string_view kind_name(QuestionKind k) {
  return k == QuestionKind::kRoot ? "root" : "intermediate";
}

std::string_view polarity_name(Polarity p) {
  return p == Polarity::kAsserted ? "asserted" : "negated";
}

Verdict verdict_from(const std::string& s) {
  if (s == "True") return Verdict::kTrue;
  if (s == "False") return Verdict::kFalse;
  if (s == "Unknown") return Verdict::kUnknown;
  throw ParseError("bad label '" + s + "'");
}

ordered_json node_json(const TreeNode& n) {
  ordered_json j;
  j["id"] = n.node_id;
  j["rule"] = n.rule ? ordered_json(std::string(logic::wire_name(*n.rule)))
                     : ordered_json(nullptr);
  j["formula"] = logic::to_text(n.conclusion);
  j["height"] = n.height;
  j["hidden"] = n.hidden;
  j["children"] = ordered_json::array();
  for (const auto& c : n.children) j["children"].push_back(node_json(c));
  return j;
}

TreeNode node_from(const ordered_json& j) {
  TreeNode n;
  n.node_id = j.at("id").get<int>();
  if (!j.at("rule").is_null()) {
    const auto name = j.at("rule").get<std::string>();
    n.rule = logic::rule_from_wire(name);
    if (!n.rule) throw ParseError("unknown rule '" + name + "'");
  }
  n.conclusion = logic::parse_formula(j.at("formula").get<std::string>());
  n.height = j.at("height").get<int>();
  n.hidden = j.at("hidden").get<bool>();
  for (const auto& c : j.at("children")) n.children.push_back(node_from(c));
  return n;
}

void collect_proof(const TreeNode& n, Realizer& r, const AtomSurface& atoms,
                   std::vector<std::string>& out) {
  if (n.is_leaf()) return;
  std::vector<Formula> premises;
  for (const auto& c : n.children) {
    collect_proof(c, r, atoms, out);
    premises.push_back(c.conclusion);
  }
  out.push_back(r.proof_step(*n.rule, premises, n.conclusion, atoms));
}

}  // namespace

std::vector<Verdict> Instance::gold() const {
  std::vector<Verdict> out;
  out.reserve(questions.size());
  for (const auto& q : questions) out.push_back(q.label);
  return out;
}

std::string instance_id(int depth, int group_id, int variant_idx) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "d%d-g%05d-v%d", depth, group_id, variant_idx);
  return buf;
}

Instance instantiate(const treegen::AbstractInstance& abstract, int group_id,
                     const treegen::DifficultyProfile& profile,
                     const FactPool& pool, const TemplatePool& templates) {
  const ArgumentTree& tree = abstract.tree;
  Instance inst;
  inst.id = instance_id(profile.depth, group_id, abstract.variant_idx);
  inst.group_id = group_id;
  inst.variant_idx = abstract.variant_idx;
  inst.depth = profile.depth;
  inst.width = profile.width;
  inst.seed = abstract.seed;
  inst.skeleton_hash = abstract.skeleton_hash;
  inst.tree = tree;

  if (abstract.fact_indices.size() < tree.atom_count) {
    throw PreconditionError("variant has fewer facts than atoms");
  }
  AtomSurface surface;
  for (std::uint32_t a = 0; a < tree.atom_count; ++a) {
    const Fact& fact = pool[abstract.fact_indices[a]];
    surface.emplace(logic::AtomId{a}, fact.text);
    inst.atoms.push_back({a, fact.id, fact.text});
  }

  inst.premises = tree.premises();
  Rng order(derive_seed(abstract.seed, "order"));
  order.shuffle(std::span<Formula>(inst.premises));

  Realizer realizer(templates, derive_seed(abstract.seed, "surface"));
  for (const auto& p : inst.premises) {
    inst.premise_texts.push_back(realizer.premise(p, surface));
    if (!inst.paragraph.empty()) inst.paragraph += ' ';
    inst.paragraph += inst.premise_texts.back();
  }
  for (const auto& q : abstract.questions) {
    QuestionRecord rec;
    rec.text = realizer.sentence(q.statement, surface);
    rec.formula = q.statement;
    rec.label = q.gold;
    rec.kind = q.kind;
    rec.node_id = q.node_id;
    rec.polarity = q.polarity;
    inst.questions.push_back(std::move(rec));
  }
  if (!templates.rules.empty()) collect_proof(tree.root, realizer, surface, inst.proof);
  return inst;
}

std::string to_json_line(const Instance& inst) {
  ordered_json j;
  j["schema"] = kInstanceSchema;
  j["id"] = inst.id;
  j["group_id"] = inst.group_id;
  j["variant_idx"] = inst.variant_idx;
  j["depth"] = inst.depth;
  j["width"] = inst.width;
  j["seed"] = inst.seed;
  j["paragraph"] = inst.paragraph;
  j["premises"] = ordered_json::array();
  for (const auto& p : inst.premises) j["premises"].push_back(logic::to_text(p));
  j["premise_texts"] = inst.premise_texts;
  j["questions"] = ordered_json::array();
  for (const auto& q : inst.questions) {
    ordered_json jq;
    jq["text"] = q.text;
    jq["formula"] = logic::to_text(q.formula);
    jq["label"] = logic::to_string(q.label);
    jq["kind"] = kind_name(q.kind);
    jq["node_id"] = q.node_id;
    jq["polarity"] = polarity_name(q.polarity);
    j["questions"].push_back(std::move(jq));
  }
  j["skeleton_hash"] = inst.skeleton_hash;
  j["atoms"] = ordered_json::array();
  for (const auto& a : inst.atoms) {
    j["atoms"].push_back({{"atom", a.atom}, {"fact_id", a.fact_id}, {"text", a.text}});
  }
  if (inst.tree) {
    ordered_json t;
    t["atom_count"] = inst.tree->atom_count;
    t["root"] = node_json(inst.tree->root);
    t["distractors"] = ordered_json::array();
    for (const auto& d : inst.tree->distractors) t["distractors"].push_back(node_json(d));
    j["tree"] = std::move(t);
  }
  j["proof"] = inst.proof;
  return j.dump();
}

Instance instance_from_json(std::string_view line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
  try {
    if (j.contains("schema") && j.at("schema").get<std::string>() != kInstanceSchema) {
      throw ParseError("unsupported instance schema " + j.at("schema").get<std::string>());
    }
    Instance inst;
    inst.id = j.at("id").get<std::string>();
    inst.group_id = j.at("group_id").get<int>();
    inst.variant_idx = j.at("variant_idx").get<int>();
    inst.depth = j.at("depth").get<int>();
    inst.width = j.value("width", 0);
    inst.seed = j.value("seed", std::uint64_t{0});
    inst.paragraph = j.at("paragraph").get<std::string>();
    for (const auto& p : j.at("premises")) {
      inst.premises.push_back(logic::parse_formula(p.get<std::string>()));
    }
    if (j.contains("premise_texts")) {
      inst.premise_texts = j.at("premise_texts").get<std::vector<std::string>>();
    }
    for (const auto& jq : j.at("questions")) {
      QuestionRecord q;
      q.text = jq.at("text").get<std::string>();
      q.formula = logic::parse_formula(jq.at("formula").get<std::string>());
      q.label = verdict_from(jq.at("label").get<std::string>());
      q.kind = jq.at("kind").get<std::string>() == "root" ? QuestionKind::kRoot
                                                         : QuestionKind::kIntermediate;
      q.node_id = jq.at("node_id").get<int>();
      q.polarity = jq.value("polarity", std::string("asserted")) == "negated"
                       ? Polarity::kNegated
                       : Polarity::kAsserted;
      inst.questions.push_back(std::move(q));
    }
    inst.skeleton_hash = j.at("skeleton_hash").get<std::string>();
    if (j.contains("atoms")) {
      for (const auto& a : j.at("atoms")) {
        inst.atoms.push_back({a.at("atom").get<std::uint32_t>(),
                              a.at("fact_id").get<std::string>(),
                              a.at("text").get<std::string>()});
      }
    }
    if (j.contains("tree")) {
      const auto& t = j.at("tree");
      ArgumentTree tree;
      tree.atom_count = t.at("atom_count").get<std::uint32_t>();
      tree.root = node_from(t.at("root"));
      for (const auto& d : t.at("distractors")) tree.distractors.push_back(node_from(d));
      inst.tree = std::move(tree);
    }
    if (j.contains("proof")) inst.proof = j.at("proof").get<std::vector<std::string>>();
    return inst;
  } catch (const ordered_json::exception& e) {
    throw ParseError(std::string("instance: ") + e.what());
  }
}

std::vector<Instance> read_instances(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<Instance> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(instance_from_json(line));
    } catch (const ParseError& e) {
      throw ParseError(path.filename().string() + ": " + e.what(), lineno);
    }
  }
  return out;
}

}  // namespace logictree::surface
