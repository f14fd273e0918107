#include "logictree/surface/templates.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "logictree/error.hpp"

namespace logictree::surface {

using nlohmann::json;

std::string_view construct_name(Construct c) {
  switch (c) {
    case Construct::kStatement: return "Statement";
    case Construct::kNegation: return "Negation";
    case Construct::kConjunction: return "Conjunction";
    case Construct::kImplication: return "Implication";
    case Construct::kDisjunction: return "Disjunction";
  }
  return "?";
}

const std::vector<std::string>& TemplatePool::of(Construct c) const {
  auto it = constructs.find(c);
  if (it == constructs.end() || it->second.empty()) {
    throw PreconditionError("no templates for " + std::string(construct_name(c)));
  }
  return it->second;
}

const std::vector<std::string>& TemplatePool::of(logic::InferenceRule r) const {
  auto it = rules.find(r);
  if (it == rules.end() || it->second.empty()) {
    throw PreconditionError("no paraphrases for " + std::string(logic::wire_name(r)));
  }
  return it->second;
}

namespace {

std::string slots_of(std::string_view t) {
  std::string out;
  for (std::size_t i = 0; i + 2 < t.size(); ++i) {
    if (t[i] == '{' && t[i + 2] == '}') out += t[i + 1];
  }
  return out;
}

void require_slots(std::string_view where, const std::string& t,
                   std::string_view needed) {
  const std::string have = slots_of(t);
  for (char c : needed) {
    if (have.find(c) == std::string::npos) {
      throw ValidationError(std::string(where) + " template lacks {" +
                            std::string(1, c) + "}: " + t);
    }
  }
  for (char c : have) {
    if (needed.find(c) == std::string_view::npos) {
      throw ValidationError(std::string(where) + " template has unknown slot {" +
                            std::string(1, c) + "}: " + t);
    }
  }
}

}  // namespace

TemplatePool parse_template_pool(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("template pool: ") + e.what());
  }
  TemplatePool pool;
  try {
    const json& cons = doc.at("constructs");
    for (Construct c : kAllConstructs) {
      const std::string name(construct_name(c));
      if (!cons.contains(name)) {
        throw ValidationError("template pool lacks construct " + name);
      }
      auto list = cons.at(name).get<std::vector<std::string>>();
      if (list.size() < kMinTemplatesPerConstruct) {
        throw ValidationError(name + " has " + std::to_string(list.size()) +
                              " templates; at least 10 are required");
      }
      const std::string_view needed =
          c == Construct::kStatement || c == Construct::kNegation ? "S" : "PQ";
      for (const auto& t : list) require_slots(name, t, needed);
      pool.constructs.emplace(c, std::move(list));
    }
    if (doc.contains("rules")) {
      for (const auto& [key, value] : doc.at("rules").items()) {
        const auto rule = logic::rule_from_wire(key);
        if (!rule) throw ValidationError("unknown rule key " + key);
        auto list = value.get<std::vector<std::string>>();
        for (const auto& t : list) require_slots(key, t, "PQ");
        pool.rules.emplace(*rule, std::move(list));
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("template pool: ") + e.what());
  }
  return pool;
}

TemplatePool load_template_pool(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open template pool " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_template_pool(ss.str());
}

std::string fill_template(std::string_view tmpl,
                          const std::map<char, std::string>& slots) {
  std::string out;
  out.reserve(tmpl.size() + 64);
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] == '{' && i + 2 < tmpl.size() && tmpl[i + 2] == '}') {
      auto it = slots.find(tmpl[i + 1]);
      if (it == slots.end()) {
        throw ValidationError("unfilled slot {" + std::string(1, tmpl[i + 1]) +
                              "} in: " + std::string(tmpl));
      }
      out += it->second;
      i += 2;
      continue;
    }
    out += tmpl[i];
  }
  return out;
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("LOGICTREE_DATA_DIR"); env && *env) {
    return env;
  }
  return LOGICTREE_DATA_DIR;
}

}  // namespace logictree::surface
