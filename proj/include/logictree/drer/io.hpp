#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "logictree/drer/kernel.hpp"

namespace logictree::drer {

inline constexpr std::string_view kBoundsSchema = "logictree.bounds/1";

// Line-delimited records {prompt_id, bucket, length, r_task, l_cot, l_nocot,
// correct, format_ok}. Absent numeric fields stay empty so the kernel can name
// them. ParseError with the line number on malformed JSON.
std::vector<Rollout> read_rollouts(std::istream& in);

// Consecutive-or-not members with the same prompt_id form one group; groups
// keep first-appearance order, members keep file order.
std::vector<std::vector<Rollout>> group_by_prompt(const std::vector<Rollout>& rollouts);

std::vector<ValidationSample> to_validation_samples(const std::vector<Rollout>& rollouts);

std::string bounds_to_json(const LengthBounds& bounds);
LengthBounds bounds_from_json(std::string_view text);

// One line per member: {prompt_id, member_idx, r_q, r, a_tilde, g, a_hat, skipped}.
void write_advantages(std::ostream& out, const std::string& prompt_id,
                      const std::vector<AdvantageResult>& results);

}  // namespace logictree::drer
