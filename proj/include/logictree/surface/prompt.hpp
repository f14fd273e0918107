#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace logictree::surface {

struct Instance;

enum class PromptMode : std::uint8_t { kCoT, kNoCoT };

std::string_view to_string(PromptMode m);
// "cot" / "nocot"; PreconditionError otherwise.
PromptMode prompt_mode_from(std::string_view name);

// The raw templates with {num_q}, {paragraph} and {current_question} left in.
std::string_view prompt_template(PromptMode mode);

struct RenderedPrompt {
  PromptMode mode = PromptMode::kCoT;
  std::string text;
  int num_q = 0;
  std::vector<std::size_t> question_indices;
};

// Placeholder substitution only; everything else is the template verbatim.
std::string fill_prompt(PromptMode mode, int num_q, std::string_view paragraph,
                        std::string_view current_question);

// Questions are listed one per line in index order. PreconditionError on an
// empty or out-of-range index list.
RenderedPrompt render_prompt(const Instance& instance,
                             const std::vector<std::size_t>& question_indices,
                             PromptMode mode);

// Every question of the instance in one prompt.
RenderedPrompt render_prompt(const Instance& instance, PromptMode mode);

}  // namespace logictree::surface
