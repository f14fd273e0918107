#pragma once

// 200 samples spread evenly over the four transition buckets. CoT responses
// in the WR and RR buckets carry the marker word the mock scorer rewards.

#include <string>
#include <vector>

#include "logictree/grader/grader.hpp"
#include "logictree/scorer/teacher.hpp"
#include "support.hpp"

namespace testing_support {

inline constexpr const char* kMarker = "Therefore";

struct ConfidenceFixture {
  std::vector<logictree::surface::Instance> instances;
  std::vector<std::string> cot;
  std::vector<std::string> nocot;
  std::vector<logictree::scorer::Transition> expected;
};

inline std::vector<logictree::logic::Verdict> flipped(std::vector<logictree::logic::Verdict> v) {
  using logictree::logic::Verdict;
  v.front() = v.front() == Verdict::kTrue ? Verdict::kFalse : Verdict::kTrue;
  return v;
}

inline ConfidenceFixture confidence_fixture(std::size_t n = 200) {
  using logictree::scorer::Transition;
  using logictree::grader::format_labels;
  ConfidenceFixture fx;
  for (std::size_t i = 0; i < n; ++i) {
    const int depth = 1 + static_cast<int>((i / 4) % 8);
    auto inst = make_group(depth, 5000 + i, 2, static_cast<int>(i)).front();
    const auto gold = inst.gold();
    const auto t = static_cast<Transition>(i % 4);
    const bool nocot_right = t == Transition::kRR || t == Transition::kRW;
    const bool cot_right = t == Transition::kWR || t == Transition::kRR;
    const bool helpful = cot_right;

    std::string think = "<think> Reading the premises one at a time. ";
    think += helpful ? std::string(kMarker) + " the chain closes at the root."
                     : "The chain seems to break somewhere.";
    think += " </think>\n";
    fx.cot.push_back(think + "<answer>" + format_labels(cot_right ? gold : flipped(gold)) +
                     "</answer>");
    fx.nocot.push_back("<answer>" + format_labels(nocot_right ? gold : flipped(gold)) +
                       "</answer>");
    fx.expected.push_back(t);
    fx.instances.push_back(std::move(inst));
  }
  return fx;
}

}  // namespace testing_support
