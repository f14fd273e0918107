#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "logictree/logic/entailment.hpp"
#include "logictree/surface/prompt.hpp"

namespace logictree::grader {

using logic::Verdict;
using surface::PromptMode;

struct ParsedAnswer {
  // An <answer>...</answer> block exists.
  bool found = false;
  // Every entry of the block is True/False/Unknown and there is at least one.
  bool parseable = false;
  bool format_ok = false;
  std::vector<Verdict> labels;
  // Byte offsets into the response: the whole last block and its contents.
  std::size_t block_begin = 0;
  std::size_t block_end = 0;
  std::size_t content_begin = 0;
  std::size_t content_end = 0;
  // Recorded even when it differs from the expected count.
  int expected = 0;

  bool length_ok() const {
    return parseable && static_cast<int>(labels.size()) == expected;
  }
};

// The last answer block wins. Tokens are matched case-insensitively; brackets
// and quotes around the list and its entries are optional. In CoT mode the
// format also needs a closing </think> before that block (the opening tag is
// part of the prompt). PreconditionError if num_q < 1.
ParsedAnswer parse_response(std::string_view text, int num_q, PromptMode mode);

struct RewardBreakdown {
  double s_format = 0;
  double s_answer = 0;
  double r_task = 0;
};

inline constexpr double kFormatOk = 1.0;
inline constexpr double kFormatBad = -1.0;
inline constexpr double kAnswerMatch = 2.0;
inline constexpr double kAnswerMismatch = -1.5;
inline constexpr double kAnswerInvalid = -2.0;

// S_answer is +2 only for a full match in a well-formed response, so R_task
// takes exactly the values {3, -0.5, -1, -2.5, -3}. PreconditionError when a
// gold label is Unknown.
RewardBreakdown task_reward(const ParsedAnswer& parsed,
                            std::span<const Verdict> gold);

// The list exactly as the answer block should contain it: "[True, False]".
std::string format_labels(std::span<const Verdict> labels);

struct GradedQuestion {
  std::string instance_id;
  std::size_t question_idx = 0;
  int depth = 1;
  int group_id = 0;
  Verdict gold = Verdict::kTrue;
  // Absent when the response could not be parsed to a list of the right size.
  std::optional<Verdict> predicted;

  bool valid() const { return predicted && *predicted != Verdict::kUnknown; }
  bool correct() const { return predicted && *predicted == gold; }
};

// Per-question records for one graded response.
std::vector<GradedQuestion> grade_questions(const ParsedAnswer& parsed,
                                            std::string_view instance_id,
                                            int depth, int group_id,
                                            std::span<const Verdict> gold,
                                            std::span<const std::size_t> question_indices);

struct MetricsOptions {
  double beta = 0.5;
  // F-beta is zero unless answer_rate is strictly above this.
  double min_answer_rate = 0.3;
};

struct MetricCell {
  std::size_t total = 0;
  std::size_t valid = 0;
  std::size_t correct = 0;
  std::size_t groups = 0;
  std::size_t consistent_groups = 0;
  double accuracy = 0;
  double answer_rate = 0;
  double precision = 0;
  // No valid answers: precision is reported as 0 and flagged.
  bool precision_undefined = false;
  double f_beta = 0;
  double consistency_ratio = 0;
};

struct MetricsReport {
  MetricsOptions options;
  std::map<int, MetricCell> by_depth;
  // Pooled over all records.
  MetricCell overall;
  // Unweighted mean of the per-depth values (the "Avg" column).
  MetricCell average;
  std::string consistency_rule;

  std::string to_json() const;
  std::string to_table() const;
};

double f_beta(double precision, double answer_rate, double beta = 0.5,
              double min_answer_rate = 0.3);

// A group is consistent when every question of every variant is correct.
// ValidationError on empty input or a depth outside [1, 8].
MetricsReport compute_metrics(std::span<const GradedQuestion> records,
                              const MetricsOptions& options = {});

// Case-insensitive, non-overlapping occurrence counts of the seven rule names,
// in logic::kAllRules order.
std::array<std::size_t, 7> paradigm_word_freq(std::span<const std::string> responses);

}  // namespace logictree::grader
