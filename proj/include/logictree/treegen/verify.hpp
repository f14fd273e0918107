#pragma once

#include <string>
#include <vector>

#include "logictree/surface/instance.hpp"

namespace logictree::treegen {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerificationReport {
  std::string instance_id;
  std::vector<CheckResult> checks;
  // Indices of questions whose stored label disagrees with the oracle.
  std::vector<std::size_t> failing_questions;

  bool passed() const;
  const CheckResult* find(std::string_view name) const;
};

// Check names, in report order.
inline constexpr std::string_view kCheckSatisfiable = "premises_satisfiable";
inline constexpr std::string_view kCheckLabels = "labels";
inline constexpr std::string_view kCheckTree = "tree";
inline constexpr std::string_view kCheckDepth = "depth";
inline constexpr std::string_view kCheckSkeleton = "skeleton_hash";

// Never throws for bad content; every problem becomes a failed check.
VerificationReport verify_instance(const surface::Instance& instance);

}  // namespace logictree::treegen
