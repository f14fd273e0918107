#include "logictree/surface/prompt.hpp"

#include "logictree/error.hpp"
#include "logictree/surface/instance.hpp"

namespace logictree::surface {

namespace {

constexpr std::string_view kCoTTemplate =
    "<|im_start|>system\n"
    "You are a helpful assistant. The assistant first thinks step by step about "
    "the reasoning process in the mind and then provides the user with the "
    "answer.\n"
    "The reasoning process and answer are enclosed within <think> \xE2\x80\xA6 "
    "</think> and <answer> \xE2\x80\xA6 </answer> tags, respectively, i.e.\n"
    "<think> Write the reasoning process for the given paragraph here </think>\n"
    "<answer> Fill in the final answer list for {num_q} question(s) here: True, "
    "False or Unknown. Like this: [True, False\xE2\x80\xA6] </answer>\n"
    "\n"
    "You must choose one of the following answers:\n"
    "-- TRUE: if the premises entail the statement\n"
    "-- FALSE: if the premises contradict the statement\n"
    "-- UNKNOWN: if you cannot determine the truth value of the statement from "
    "the premises\n"
    "\n"
    "You will be given a paragraph of logical premises and a statement. Perform "
    "logical reasoning strictly based on the premises using propositional "
    "logic.\n"
    "Assume all premises are true. Do not rely on prior world knowledge.\n"
    "<|im_end|>\n"
    "<|im_start|>user\n"
    "Paragraph: {paragraph}\n"
    "\n"
    "{current_question}\n"
    "<|im_end|>\n"
    "<|im_start|>assistant\n"
    "<think>";

constexpr std::string_view kNoCoTTemplate =
    "<|im_start|>system\n"
    "You are a helpful assistant. You answer questions by solely using logical "
    "reasoning.\n"
    "You will be given a paragraph of logical premises and a statement. Perform "
    "logical reasoning strictly based on the premises using propositional "
    "logic.\n"
    "Assume all premises are true. Do not rely on prior world knowledge.\n"
    "\n"
    "<answer> Fill in the final answer list for {num_q} question(s) here: True, "
    "False or Unknown. Like this: [True, False...] </answer>\n"
    "You must choose one of the following answers:\n"
    "  -- TRUE: if the premises entail the statement\n"
    "  -- FALSE: if the premises contradict the statement\n"
    "  -- UNKNOWN: if you cannot determine the truth value of the statement "
    "based on the premises\n"
    "<|im_end|>\n"
    "<|im_start|>user\n"
    "Paragraph: {paragraph}\n"
    "\n"
    "{current_question}\n"
    "<|im_end|>\n"
    "<|im_start|>assistant\n";

void replace_once(std::string& s, std::string_view key, std::string_view value) {
  const auto pos = s.find(key);
  if (pos == std::string::npos) {
    throw InternalError("prompt template lost placeholder " + std::string(key));
  }
  s.replace(pos, key.size(), value);
}

}  // namespace

std::string_view to_string(PromptMode m) {
  return m == PromptMode::kCoT ? "cot" : "nocot";
}

PromptMode prompt_mode_from(std::string_view name) {
  if (name == "cot") return PromptMode::kCoT;
  if (name == "nocot") return PromptMode::kNoCoT;
  throw PreconditionError("prompt mode must be cot or nocot, got " +
                          std::string(name));
}

std::string_view prompt_template(PromptMode mode) {
  return mode == PromptMode::kCoT ? kCoTTemplate : kNoCoTTemplate;
}

std::string fill_prompt(PromptMode mode, int num_q, std::string_view paragraph,
                        std::string_view current_question) {
  std::string out(prompt_template(mode));
  // Substitute in template order so a placeholder-like string inside the
  // paragraph is never expanded.
  replace_once(out, "{num_q}", std::to_string(num_q));
  const auto p = out.find("{paragraph}");
  const auto q = out.find("{current_question}", p);
  if (p == std::string::npos || q == std::string::npos) {
    throw InternalError("prompt template lost a placeholder");
  }
  out.replace(q, std::string_view("{current_question}").size(), current_question);
  out.replace(p, std::string_view("{paragraph}").size(), paragraph);
  return out;
}

RenderedPrompt render_prompt(const Instance& instance,
                             const std::vector<std::size_t>& question_indices,
                             PromptMode mode) {
  if (question_indices.empty()) {
    throw PreconditionError("a prompt needs at least one question");
  }
  std::string questions;
  for (std::size_t i : question_indices) {
    if (i >= instance.questions.size()) {
      throw PreconditionError("question index " + std::to_string(i) +
                              " out of range for " + instance.id);
    }
    if (!questions.empty()) questions += '\n';
    questions += instance.questions[i].text;
  }
  RenderedPrompt r;
  r.mode = mode;
  r.num_q = static_cast<int>(question_indices.size());
  r.question_indices = question_indices;
  r.text = fill_prompt(mode, r.num_q, instance.paragraph, questions);
  return r;
}

RenderedPrompt render_prompt(const Instance& instance, PromptMode mode) {
  std::vector<std::size_t> all(instance.questions.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return render_prompt(instance, all, mode);
}

}  // namespace logictree::surface
