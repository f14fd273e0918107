#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "logictree/error.hpp"
#include "logictree/grader/grader.hpp"

using namespace logictree;
using namespace logictree::grader;

namespace {

constexpr Verdict T = Verdict::kTrue;
constexpr Verdict F = Verdict::kFalse;
constexpr Verdict U = Verdict::kUnknown;

double reward(std::string_view response, std::vector<Verdict> gold,
              PromptMode mode = PromptMode::kCoT) {
  return task_reward(parse_response(response, static_cast<int>(gold.size()), mode), gold).r_task;
}

GradedQuestion rec(int depth, int group, Verdict gold, std::optional<Verdict> pred) {
  GradedQuestion g;
  g.instance_id = "i";
  g.depth = depth;
  g.group_id = group;
  g.gold = gold;
  g.predicted = pred;
  return g;
}

}  // namespace

TEST(Parse, ThinkThenAnswer) {
  const auto p = parse_response("<think> x </think><answer>[True, False]</answer>", 2, PromptMode::kCoT);
  EXPECT_TRUE(p.found);
  EXPECT_TRUE(p.parseable);
  EXPECT_TRUE(p.format_ok);
  EXPECT_EQ(p.labels, (std::vector<Verdict>{T, F}));
  EXPECT_TRUE(p.length_ok());
}

TEST(Parse, CaseFolding) {
  const auto p = parse_response("<answer>[true, UNKNOWN]</answer>", 2, PromptMode::kNoCoT);
  EXPECT_TRUE(p.parseable);
  EXPECT_EQ(p.labels, (std::vector<Verdict>{T, U}));
  EXPECT_TRUE(p.format_ok);
}

TEST(Parse, MissingBlock) {
  const auto p = parse_response("The answer is yes.", 1, PromptMode::kCoT);
  EXPECT_FALSE(p.found);
  EXPECT_FALSE(p.parseable);
  EXPECT_FALSE(p.format_ok);
}

TEST(Parse, LastBlockWins) {
  const auto p = parse_response(
      "</think><answer>[False]</answer> wait <answer>[True]</answer>", 1, PromptMode::kCoT);
  EXPECT_EQ(p.labels, std::vector<Verdict>{T});
}

TEST(Parse, LooseListForms) {
  for (const char* body : {"True, False", "['True', 'False']", "[**True**, False.]", "[ \"true\",false ]"}) {
    const auto p = parse_response(std::string("</think><answer>") + body + "</answer>", 2,
                                  PromptMode::kCoT);
    EXPECT_TRUE(p.parseable) << body;
    EXPECT_EQ(p.labels, (std::vector<Verdict>{T, F})) << body;
  }
}

TEST(Parse, Garbage) {
  EXPECT_FALSE(parse_response("</think><answer>[Maybe]</answer>", 1, PromptMode::kCoT).parseable);
  EXPECT_FALSE(parse_response("</think><answer>[]</answer>", 1, PromptMode::kCoT).parseable);
  EXPECT_FALSE(parse_response("</think><answer>[True, ]</answer>", 1, PromptMode::kCoT).parseable);
  EXPECT_THROW(parse_response("x", 0, PromptMode::kCoT), PreconditionError);
}

TEST(Parse, CoTNeedsClosingThink) {
  EXPECT_FALSE(parse_response("<answer>[True]</answer>", 1, PromptMode::kCoT).format_ok);
  EXPECT_FALSE(parse_response("<answer>[True]</answer></think>", 1, PromptMode::kCoT).format_ok);
  EXPECT_TRUE(parse_response("<answer>[True]</answer>", 1, PromptMode::kNoCoT).format_ok);
}

TEST(Parse, Offsets) {
  const std::string r = "</think> <answer>[True]</answer>";
  const auto p = parse_response(r, 1, PromptMode::kCoT);
  EXPECT_EQ(r.substr(p.block_begin, p.block_end - p.block_begin), "<answer>[True]</answer>");
  EXPECT_EQ(r.substr(p.content_begin, p.content_end - p.content_begin), "[True]");
}

TEST(Reward, SpecRows) {
  const auto full = task_reward(
      parse_response("<think>…</think><answer>[True, False]</answer>", 2, PromptMode::kCoT),
      std::vector<Verdict>{T, F});
  EXPECT_EQ(full.s_format, 1.0);
  EXPECT_EQ(full.s_answer, 2.0);
  EXPECT_EQ(full.r_task, 3.0);
  EXPECT_EQ(reward("<think>…</think><answer>[True, True]</answer>", {T, F}), -0.5);
  const auto bad = task_reward(parse_response("The answer is yes.", 2, PromptMode::kCoT),
                               std::vector<Verdict>{T, F});
  EXPECT_EQ(bad.s_format, -1.0);
  EXPECT_EQ(bad.s_answer, -2.0);
  EXPECT_EQ(bad.r_task, -3.0);
}

TEST(Reward, FiveReachableValues) {
  EXPECT_EQ(reward("</think><answer>[True, False]</answer>", {T, F}), 3.0);
  EXPECT_EQ(reward("</think><answer>[False, False]</answer>", {T, F}), -0.5);
  EXPECT_EQ(reward("</think><answer>[True]</answer>", {T, F}), -1.0);
  EXPECT_EQ(reward("</think><answer>[Yes, No]</answer>", {T, F}), -1.0);
  EXPECT_EQ(reward("<answer>[True, False]</answer>", {T, F}), -2.5);
  EXPECT_EQ(reward("<answer>[True, True]</answer>", {T, F}), -2.5);
  EXPECT_EQ(reward("no block", {T, F}), -3.0);
  EXPECT_EQ(reward("<answer>[Nope]</answer>", {T, F}), -3.0);
  EXPECT_EQ(reward("</think><answer>[Unknown, False]</answer>", {T, F}), -0.5);
}

TEST(Reward, UnknownGoldRejected) {
  const auto p = parse_response("</think><answer>[True]</answer>", 1, PromptMode::kCoT);
  EXPECT_THROW(task_reward(p, std::vector<Verdict>{U}), PreconditionError);
}

TEST(Reward, FormatLabels) {
  EXPECT_EQ(format_labels(std::vector<Verdict>{T, F, U}), "[True, False, Unknown]");
}

TEST(Metrics, FBeta) {
  EXPECT_NEAR(f_beta(0.5, 0.8), 0.5 / 0.925, 1e-12);
  EXPECT_NEAR(f_beta(0.5, 0.8), 0.5405, 1e-4);
  EXPECT_EQ(f_beta(1.0, 0.25), 0.0);
  EXPECT_EQ(f_beta(1.0, 0.3), 0.0);
  EXPECT_GT(f_beta(1.0, 0.30001), 0.0);
  EXPECT_EQ(f_beta(1.0, 1.0), 1.0);
}

TEST(Metrics, PerfectScore) {
  std::vector<GradedQuestion> recs = {rec(1, 0, T, T), rec(1, 0, F, F), rec(2, 1, T, T)};
  const auto m = compute_metrics(recs);
  EXPECT_EQ(m.overall.accuracy, 1.0);
  EXPECT_EQ(m.overall.answer_rate, 1.0);
  EXPECT_EQ(m.overall.precision, 1.0);
  EXPECT_EQ(m.overall.f_beta, 1.0);
  EXPECT_EQ(m.overall.consistency_ratio, 1.0);
}

TEST(Metrics, HandBuiltFractions) {
  // Depth 2: 10 questions, 8 valid, 4 correct.
  // Depth 3: 4 questions, 1 valid, 1 correct.
  std::vector<GradedQuestion> recs;
  for (int i = 0; i < 4; ++i) recs.push_back(rec(2, 0, T, T));
  for (int i = 0; i < 4; ++i) recs.push_back(rec(2, 1, T, F));
  recs.push_back(rec(2, 2, T, U));
  recs.push_back(rec(2, 2, F, std::nullopt));
  recs.push_back(rec(3, 3, F, F));
  recs.push_back(rec(3, 3, T, std::nullopt));
  recs.push_back(rec(3, 4, T, U));
  recs.push_back(rec(3, 4, F, U));
  const auto m = compute_metrics(recs);

  const auto& d2 = m.by_depth.at(2);
  EXPECT_EQ(d2.accuracy, 4.0 / 10.0);
  EXPECT_EQ(d2.answer_rate, 8.0 / 10.0);
  EXPECT_EQ(d2.precision, 4.0 / 8.0);
  EXPECT_NEAR(d2.f_beta, 0.5405, 1e-4);
  EXPECT_EQ(d2.groups, 3u);
  EXPECT_EQ(d2.consistent_groups, 1u);
  EXPECT_EQ(d2.consistency_ratio, 1.0 / 3.0);

  const auto& d3 = m.by_depth.at(3);
  EXPECT_EQ(d3.accuracy, 1.0 / 4.0);
  EXPECT_EQ(d3.answer_rate, 1.0 / 4.0);
  EXPECT_EQ(d3.precision, 1.0);
  EXPECT_EQ(d3.f_beta, 0.0);
  EXPECT_EQ(d3.consistency_ratio, 0.0);

  EXPECT_EQ(m.overall.accuracy, 5.0 / 14.0);
  EXPECT_EQ(m.overall.answer_rate, 9.0 / 14.0);
  EXPECT_EQ(m.overall.precision, 5.0 / 9.0);
  EXPECT_DOUBLE_EQ(m.average.accuracy, (0.4 + 0.25) / 2);
  EXPECT_DOUBLE_EQ(m.average.consistency_ratio, (1.0 / 3.0) / 2);
  EXPECT_NE(m.to_table().find("Avg"), std::string::npos);
  EXPECT_NE(m.to_json().find("\"by_depth\""), std::string::npos);
}

TEST(Metrics, NoValidAnswers) {
  std::vector<GradedQuestion> recs = {rec(1, 0, T, std::nullopt), rec(1, 0, F, U)};
  const auto m = compute_metrics(recs);
  EXPECT_TRUE(m.overall.precision_undefined);
  EXPECT_EQ(m.overall.precision, 0.0);
  EXPECT_EQ(m.overall.f_beta, 0.0);
}

TEST(Metrics, Errors) {
  EXPECT_THROW(compute_metrics({}), ValidationError);
  std::vector<GradedQuestion> bad = {rec(9, 0, T, T)};
  EXPECT_THROW(compute_metrics(bad), ValidationError);
  std::vector<GradedQuestion> split = {rec(1, 0, T, T), rec(2, 0, T, T)};
  EXPECT_THROW(compute_metrics(split), ValidationError);
}

TEST(Metrics, GradeQuestions) {
  const std::vector<Verdict> gold = {T, F};
  const std::vector<std::size_t> idx = {0, 3};
  const auto ok = grade_questions(parse_response("</think><answer>[True, True]</answer>", 2, PromptMode::kCoT),
                                  "x", 4, 9, gold, idx);
  ASSERT_EQ(ok.size(), 2u);
  EXPECT_TRUE(ok[0].correct());
  EXPECT_FALSE(ok[1].correct());
  EXPECT_TRUE(ok[1].valid());
  EXPECT_EQ(ok[1].question_idx, 3u);
  const auto short_list = grade_questions(
      parse_response("</think><answer>[True]</answer>", 2, PromptMode::kCoT), "x", 4, 9, gold, idx);
  EXPECT_FALSE(short_list[0].predicted.has_value());
}

TEST(WordFreq, SingleHit) {
  const std::vector<std::string> r = {"We apply Modus Tollens twice"};
  const auto c = paradigm_word_freq(r);
  EXPECT_EQ(c[1], 1u);
  EXPECT_EQ(std::accumulate(c.begin(), c.end(), std::size_t{0}), 1u);
}

TEST(WordFreq, Empty) {
  const auto c = paradigm_word_freq({});
  for (auto v : c) EXPECT_EQ(v, 0u);
}

TEST(WordFreq, CraftedCorpus) {
  const std::vector<std::string> r = {
      "By modus ponens, q. Again modus ponens gives r.",
      "MODUS PONENS and then Reductio ad Absurdum.",
      "Nothing here.",
  };
  const auto c = paradigm_word_freq(r);
  EXPECT_EQ(c[0], 3u);
  EXPECT_EQ(c[4], 1u);
  EXPECT_EQ(std::accumulate(c.begin(), c.end(), std::size_t{0}), 4u);
}
