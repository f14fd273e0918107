#pragma once

#include <array>
#include <string>
#include <vector>

#include "logictree/scorer/scorer.hpp"
#include "logictree/surface/instance.hpp"

namespace logictree::scorer {

// A text with the gold answer list at [span_begin, span_end).
struct ForcedText {
  std::string text;
  std::size_t span_begin = 0;
  std::size_t span_end = 0;

  std::string_view context() const { return std::string_view(text).substr(0, span_begin); }
  std::string_view span() const {
    return std::string_view(text).substr(span_begin, span_end - span_begin);
  }
};

struct TeacherForcedPair {
  std::string gold;
  // CoT prompt + response with the answer-block contents replaced by gold.
  ForcedText cot;
  // No-CoT prompt + "<answer>" gold "</answer>".
  ForcedText nocot;
  // The response had no answer block; one was inserted after </think>.
  bool fallback = false;
};

TeacherForcedPair build_teacher_forced_pair(std::string_view cot_response,
                                            const surface::Instance& instance,
                                            const std::vector<std::size_t>& question_indices);

// Mean log-prob of the span tokens given everything before the span.
// Scorer failures surface as TransportError.
double mean_gold_logprob(Scorer& scorer, const ForcedText& member);

enum class Transition : std::uint8_t { kWR, kRR, kWW, kRW };

std::string_view to_string(Transition t);
// Keyed by (No-CoT correct, CoT correct): W->R is WR, and so on.
Transition classify(bool nocot_correct, bool cot_correct);

struct ConfidenceRecord {
  std::string instance_id;
  double l_cot = 0;
  double l_nocot = 0;
  double delta = 0;
  bool cot_correct = false;
  bool nocot_correct = false;
  Transition bucket = Transition::kWW;
  bool fallback = false;
};

struct BucketSummary {
  std::size_t n = 0;
  double mean_delta = 0;
};

struct ConfidenceReport {
  std::vector<ConfidenceRecord> records;
  // Indexed by Transition.
  std::array<BucketSummary, 4> buckets;

  std::string to_json() const;
};

struct ConfidenceOptions {
  // Concurrent samples; capped by the scorer's own limit.
  std::size_t max_in_flight = 4;
};

// One sample per instance, every question in one prompt. Correct means the
// parsed list equals the gold list. ValidationError when the three inputs
// differ in length. Records come back in input order.
ConfidenceReport confidence_analysis(Scorer& scorer,
                                     const std::vector<surface::Instance>& instances,
                                     const std::vector<std::string>& cot_responses,
                                     const std::vector<std::string>& nocot_responses,
                                     const ConfidenceOptions& options = {});

}  // namespace logictree::scorer
