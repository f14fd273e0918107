#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "logictree/error.hpp"
#include "logictree/surface/dataset.hpp"
#include "logictree/surface/fact_pool.hpp"
#include "logictree/surface/instance.hpp"
#include "logictree/surface/prompt.hpp"
#include "logictree/surface/realize.hpp"
#include "logictree/surface/templates.hpp"
#include "logictree/treegen/verify.hpp"
#include "support.hpp"

using namespace logictree;
using namespace logictree::surface;
using logic::atom;
using logic::AtomId;
using testing_support::make_group;
using testing_support::make_instance;
using testing_support::slurp;

namespace {

FactPool parse(const std::string& text, FactFilters f = {}) {
  std::istringstream in(text);
  return parse_fact_pool(in, f, "test");
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

std::string fixture(const char* name) {
  return slurp(std::filesystem::path(LOGICTREE_FIXTURE_DIR) / name);
}

TemplatePool single(Construct c, std::string tmpl) {
  TemplatePool pool;
  pool.constructs[c] = {std::move(tmpl)};
  return pool;
}

}  // namespace

TEST(FactPool, ThreeLines) {
  const auto pool = parse(
      "f1\tAlice studies every single evening.\n"
      "f2\tThe library opens at nine.\n"
      "# comment\n\n"
      "f3\tBob waters the garden daily.\n");
  ASSERT_EQ(pool.size(), 3u);
  EXPECT_EQ(pool[1].id, "f2");
  EXPECT_EQ(pool[2].text, "Bob waters the garden daily.");
}

TEST(FactPool, DuplicateTextDropped) {
  const auto pool = parse(
      "f1\tThe library opens at nine.\n"
      "f2\tThe library opens at nine.\n"
      "f3\tBob waters the garden daily.\n");
  EXPECT_EQ(pool.size(), 2u);
  EXPECT_EQ(pool.dropped, 1u);
}

TEST(FactPool, AllTooLongIsCapacityError) {
  std::string long_text;
  for (int i = 0; i < 31; ++i) long_text += "word ";
  EXPECT_THROW(parse("f1\t" + long_text + "\nf2\t" + long_text + "\n"), CapacityError);
}

TEST(FactPool, MalformedLines) {
  try {
    parse("f1\tThe library opens at nine.\nno tab here\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse("f1\tThe library opens at nine.\nf1\tBob waters the garden daily.\n"),
               ParseError);
  EXPECT_THROW(parse("\tThe library opens at nine.\n"), ParseError);
}

TEST(FactPool, BannedAndShort) {
  const auto pool = parse(
      "f1\tDoes the library open at nine?\n"
      "f2\tToo short.\n"
      "f3\tBob waters the garden daily.\n");
  EXPECT_EQ(pool.size(), 1u);
}

TEST(FactPool, ShippedPool) {
  const auto& pool = testing_support::facts();
  EXPECT_GE(pool.size(), 200u);
  std::set<std::string> texts;
  for (const auto& f : pool.facts) texts.insert(f.text);
  EXPECT_EQ(texts.size(), pool.size());
}

TEST(Templates, ShippedPoolHasTenPerConstruct) {
  const auto& pool = testing_support::templates();
  for (Construct c : kAllConstructs) EXPECT_GE(pool.of(c).size(), kMinTemplatesPerConstruct);
  for (auto r : logic::kAllRules) EXPECT_FALSE(pool.of(r).empty());
}

TEST(Templates, Validation) {
  EXPECT_THROW(parse_template_pool("{"), ParseError);
  EXPECT_THROW(parse_template_pool(R"({"constructs": {"Statement": ["{S}"]}})"), ValidationError);
  EXPECT_EQ(fill_template("If {P}, then {Q}.", {{'P', "it rains"}, {'Q', "we stay"}}),
            "If it rains, then we stay.");
  EXPECT_THROW(fill_template("If {P}, then {Q}.", {{'P', "it rains"}}), ValidationError);
}

TEST(Realize, NegationTemplate) {
  const auto pool = single(Construct::kNegation, "The claim that {S} is false.");
  const AtomSurface atoms = {{AtomId{0}, "Alice studies."}};
  EXPECT_EQ(realize(logic::neg(atom(0)), atoms, pool, 1), "The claim that Alice studies is false.");
}

TEST(Realize, ImplicationTemplate) {
  const auto pool = single(Construct::kImplication, "Provided that {P}, we know that {Q}.");
  const AtomSurface atoms = {{AtomId{0}, "Alice studies."}, {AtomId{1}, "The exam goes well."}};
  EXPECT_EQ(realize(logic::imp(atom(0), atom(1)), atoms, pool, 1),
            "Provided that Alice studies, we know that the exam goes well.");
}

TEST(Realize, AtomPassthrough) {
  const AtomSurface atoms = {{AtomId{0}, "Alice studies."}};
  EXPECT_EQ(realize(atom(0), atoms, testing_support::templates(), 3), "Alice studies.");
}

TEST(Realize, NestedAndMissingAtom) {
  TemplatePool pool = single(Construct::kNegation, "It is not the case that {S}.");
  pool.constructs[Construct::kDisjunction] = {"Either {P} or {Q}."};
  const AtomSurface atoms = {{AtomId{0}, "The dog barks."}, {AtomId{1}, "Alice studies."}};
  EXPECT_EQ(realize(logic::neg(logic::disj(atom(0), atom(1))), atoms, pool, 1),
            "It is not the case that either the dog barks or Alice studies.");
  EXPECT_THROW(realize(atom(5), atoms, pool, 1), PreconditionError);
}

TEST(Realize, Deterministic) {
  const auto f = logic::imp(logic::disj(atom(0), atom(1)), logic::neg(atom(0)));
  const AtomSurface atoms = {{AtomId{0}, "The dog barks."}, {AtomId{1}, "Alice studies."}};
  const auto& pool = testing_support::templates();
  EXPECT_EQ(realize(f, atoms, pool, 77), realize(f, atoms, pool, 77));
}

TEST(Realize, TemplateCoverage) {
  const auto& pool = testing_support::templates();
  const AtomSurface atoms = {{AtomId{0}, "The dog barks."}, {AtomId{1}, "Alice studies."}};
  const std::vector<std::pair<Construct, logic::Formula>> cases = {
      {Construct::kNegation, logic::neg(atom(0))},
      {Construct::kConjunction, logic::conj(atom(0), atom(1))},
      {Construct::kImplication, logic::imp(atom(0), atom(1))},
      {Construct::kDisjunction, logic::disj(atom(0), atom(1))},
  };
  for (const auto& [c, f] : cases) {
    std::set<std::string> seen;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) seen.insert(realize(f, atoms, pool, seed));
    for (const auto& t : pool.of(c)) {
      const auto expected = realize(f, atoms, single(c, t), 0);
      EXPECT_TRUE(seen.count(expected)) << construct_name(c) << ": " << t;
    }
  }
  // Statements only appear as paragraph premises.
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Realizer r(pool, seed);
    seen.insert(r.premise(atom(0), atoms));
  }
  EXPECT_EQ(seen.size(), pool.of(Construct::kStatement).size());
}

TEST(Prompt, TemplatesMatchFixtures) {
  EXPECT_EQ(std::string(prompt_template(PromptMode::kCoT)), fixture("cot_template.txt"));
  EXPECT_EQ(std::string(prompt_template(PromptMode::kNoCoT)), fixture("nocot_template.txt"));
}

TEST(Prompt, RenderedPromptMatchesAfterMasking) {
  const auto inst = make_instance(4, 31);
  for (auto mode : {PromptMode::kCoT, PromptMode::kNoCoT}) {
    const auto p = render_prompt(inst, mode);
    std::string questions;
    for (std::size_t i = 0; i < inst.questions.size(); ++i) {
      if (i) questions += "\n";
      questions += inst.questions[i].text;
    }
    std::string masked = replace_all(p.text, inst.paragraph, "{paragraph}");
    masked = replace_all(masked, questions, "{current_question}");
    masked = replace_all(masked, " " + std::to_string(inst.questions.size()) + " question(s)",
                         " {num_q} question(s)");
    EXPECT_EQ(masked, fixture(mode == PromptMode::kCoT ? "cot_template.txt" : "nocot_template.txt"));
  }
}

TEST(Prompt, NumQAndEnding) {
  const auto inst = make_instance(3, 2);
  const auto p = render_prompt(inst, {0, 1}, PromptMode::kCoT);
  EXPECT_EQ(p.num_q, 2);
  EXPECT_NE(p.text.find("final answer list for 2 question(s)"), std::string::npos);
  EXPECT_TRUE(p.text.ends_with("<|im_start|>assistant\n<think>"));
  EXPECT_EQ(p.text, render_prompt(inst, {0, 1}, PromptMode::kCoT).text);
  EXPECT_THROW(render_prompt(inst, {}, PromptMode::kCoT), PreconditionError);
  EXPECT_THROW(render_prompt(inst, {99}, PromptMode::kCoT), PreconditionError);
  EXPECT_THROW(prompt_mode_from("plain"), PreconditionError);
}

TEST(Prompt, CoTAndNoCoTShareParagraph) {
  const auto inst = make_instance(5, 4);
  const auto cot = render_prompt(inst, PromptMode::kCoT).text;
  const auto nocot = render_prompt(inst, PromptMode::kNoCoT).text;
  const std::string tail = "Paragraph: " + inst.paragraph + "\n\n";
  EXPECT_NE(cot.find(tail), std::string::npos);
  EXPECT_NE(nocot.find(tail), std::string::npos);
  // Outside the substituted regions the two differ only where the templates do.
  EXPECT_EQ(replace_all(cot, inst.paragraph, "#"), fill_prompt(PromptMode::kCoT,
            static_cast<int>(inst.questions.size()), "#",
            cot.substr(cot.find(tail) + tail.size(),
                       cot.rfind("\n<|im_end|>") - cot.find(tail) - tail.size())));
}

TEST(Instance, FieldsAndIds) {
  const auto group = make_group(3, 12, 5, 7);
  ASSERT_EQ(group.size(), 5u);
  for (int v = 0; v < 5; ++v) {
    const auto& inst = group[v];
    EXPECT_EQ(inst.id, instance_id(3, 7, v));
    EXPECT_EQ(inst.group_id, 7);
    EXPECT_EQ(inst.variant_idx, v);
    EXPECT_EQ(inst.questions.size(), 3u);
    EXPECT_EQ(inst.premises.size(), inst.premise_texts.size());
    EXPECT_EQ(inst.skeleton_hash, group[0].skeleton_hash);
    EXPECT_FALSE(inst.proof.empty());
    for (const auto& t : inst.premise_texts) EXPECT_NE(inst.paragraph.find(t), std::string::npos);
  }
  EXPECT_EQ(instance_id(3, 7, 2), "d3-g00007-v2");
  EXPECT_NE(group[0].paragraph, group[1].paragraph);
}

TEST(Instance, JsonRoundTrip) {
  for (int d = 1; d <= 8; ++d) {
    const auto inst = make_instance(d, 50 + d);
    const auto line = to_json_line(inst);
    EXPECT_EQ(line.find('\n'), std::string::npos);
    const auto back = instance_from_json(line);
    EXPECT_EQ(back, inst);
    EXPECT_EQ(to_json_line(back), line);
  }
  EXPECT_THROW(instance_from_json("{}"), ParseError);
  EXPECT_THROW(instance_from_json("not json"), ParseError);
}

TEST(Dataset, Apportion) {
  EXPECT_EQ(apportion(12, {10, 1, 1}), (std::array<std::size_t, 3>{10, 1, 1}));
  EXPECT_EQ(apportion(240, {10, 1, 1}), (std::array<std::size_t, 3>{200, 20, 20}));
  EXPECT_EQ(apportion(13, {10, 1, 1}), (std::array<std::size_t, 3>{11, 1, 1}));
  EXPECT_EQ(apportion(0, {10, 1, 1}), (std::array<std::size_t, 3>{0, 0, 0}));
}

TEST(Dataset, SmallRunIsDeterministicAndAtomic) {
  GenerateOptions opts;
  opts.groups_per_depth = 12;
  opts.seed = 9;
  const auto a = generate_dataset(opts, testing_support::facts(), testing_support::templates());
  opts.jobs = 3;
  const auto b = generate_dataset(opts, testing_support::facts(), testing_support::templates());
  ASSERT_EQ(a.size(), 8u * 12u * 5u);
  EXPECT_EQ(a, b);

  for (const auto& inst : a) EXPECT_TRUE(treegen::verify_instance(inst).passed()) << inst.id;

  const auto dir1 = testing_support::scratch_dir("ds1");
  const auto dir2 = testing_support::scratch_dir("ds2");
  const auto m = write_dataset(a, {10, 1, 1}, 9, dir1);
  write_dataset(b, {10, 1, 1}, 9, dir2);
  for (const char* f : {"train.jsonl", "val.jsonl", "test.jsonl", "manifest.json"}) {
    EXPECT_EQ(slurp(dir1 / f), slurp(dir2 / f)) << f;
  }
  EXPECT_EQ(m.splits[0].groups, 80u);
  EXPECT_EQ(m.splits[1].groups, 8u);
  EXPECT_EQ(m.splits[2].groups, 8u);

  std::map<int, std::set<std::string>> split_of_group;
  for (const char* f : {"train.jsonl", "val.jsonl", "test.jsonl"}) {
    for (const auto& inst : read_instances(dir1 / f)) split_of_group[inst.group_id].insert(f);
  }
  EXPECT_EQ(split_of_group.size(), 96u);
  for (const auto& [g, splits] : split_of_group) EXPECT_EQ(splits.size(), 1u) << g;
}

TEST(Dataset, WriteErrors) {
  EXPECT_THROW(write_dataset({}, {10, 1, 1}, 1, testing_support::scratch_dir("empty")),
               PreconditionError);
  const auto one = make_group(1, 3);
  EXPECT_THROW(write_dataset(one, {10, 0, 1}, 1, testing_support::scratch_dir("ratio")),
               PreconditionError);
}
