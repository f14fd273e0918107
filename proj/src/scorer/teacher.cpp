#include "logictree/scorer/teacher.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "logictree/error.hpp"
#include "logictree/grader/grader.hpp"
#include "logictree/surface/prompt.hpp"

namespace logictree::scorer {

using surface::PromptMode;

TeacherForcedPair build_teacher_forced_pair(std::string_view cot_response,
                                            const surface::Instance& instance,
                                            const std::vector<std::size_t>& question_indices) {
  std::vector<logic::Verdict> gold;
  for (std::size_t i : question_indices) {
    if (i >= instance.questions.size()) {
      throw PreconditionError("question index out of range for " + instance.id);
    }
    gold.push_back(instance.questions[i].label);
  }

  TeacherForcedPair pair;
  pair.gold = grader::format_labels(gold);

  const std::string cot_prompt =
      surface::render_prompt(instance, question_indices, PromptMode::kCoT).text;
  const auto parsed = grader::parse_response(
      cot_response, static_cast<int>(question_indices.size()), PromptMode::kCoT);

  std::string response;
  std::size_t span_in_response = 0;
  if (parsed.found) {
    response.append(cot_response.substr(0, parsed.content_begin));
    span_in_response = response.size();
    response += pair.gold;
    response.append(cot_response.substr(parsed.content_end));
  } else {
    pair.fallback = true;
    const auto think = cot_response.rfind("</think>");
    if (think != std::string_view::npos) {
      const std::size_t cut = think + std::string_view("</think>").size();
      response.append(cot_response.substr(0, cut));
      response += "\n<answer>";
      span_in_response = response.size();
      response += pair.gold;
      response += "</answer>";
      response.append(cot_response.substr(cut));
    } else {
      response.append(cot_response);
      response += "\n</think>\n<answer>";
      span_in_response = response.size();
      response += pair.gold;
      response += "</answer>";
    }
  }
  pair.cot.text = cot_prompt + response;
  pair.cot.span_begin = cot_prompt.size() + span_in_response;
  pair.cot.span_end = pair.cot.span_begin + pair.gold.size();

  const std::string nocot_prompt =
      surface::render_prompt(instance, question_indices, PromptMode::kNoCoT).text;
  pair.nocot.text = nocot_prompt + "<answer>" + pair.gold + "</answer>";
  pair.nocot.span_begin = nocot_prompt.size() + std::string_view("<answer>").size();
  pair.nocot.span_end = pair.nocot.span_begin + pair.gold.size();
  return pair;
}

double mean_gold_logprob(Scorer& scorer, const ForcedText& member) {
  if (member.span_begin > member.span_end || member.span_end > member.text.size()) {
    throw PreconditionError("answer span outside the text");
  }
  const auto tokens = scorer.score_continuation(member.context(), member.span());
  validate_scores(tokens, member.span());
  return mean_logprob(tokens);
}

std::string_view to_string(Transition t) {
  switch (t) {
    case Transition::kWR: return "WR";
    case Transition::kRR: return "RR";
    case Transition::kWW: return "WW";
    case Transition::kRW: return "RW";
  }
  return "?";
}

Transition classify(bool nocot_correct, bool cot_correct) {
  if (!nocot_correct) return cot_correct ? Transition::kWR : Transition::kWW;
  return cot_correct ? Transition::kRR : Transition::kRW;
}

std::string ConfidenceReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = "logictree.confidence/1";
  nlohmann::ordered_json table;
  for (Transition t : {Transition::kWR, Transition::kRR, Transition::kWW, Transition::kRW}) {
    const auto& b = buckets[static_cast<std::size_t>(t)];
    table[std::string(to_string(t))] = {{"n", b.n}, {"mean_delta", b.mean_delta}};
  }
  j["table"] = std::move(table);
  j["records"] = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    j["records"].push_back({{"instance_id", r.instance_id},
                            {"l_cot", r.l_cot},
                            {"l_nocot", r.l_nocot},
                            {"delta", r.delta},
                            {"nocot_correct", r.nocot_correct},
                            {"cot_correct", r.cot_correct},
                            {"bucket", to_string(r.bucket)},
                            {"fallback", r.fallback}});
  }
  return j.dump(2) + "\n";
}

namespace {

bool fully_correct(std::string_view response, PromptMode mode,
                   const std::vector<logic::Verdict>& gold) {
  const auto p = grader::parse_response(response, static_cast<int>(gold.size()), mode);
  return p.parseable && p.labels == gold;
}

}  // namespace

ConfidenceReport confidence_analysis(Scorer& scorer,
                                     const std::vector<surface::Instance>& instances,
                                     const std::vector<std::string>& cot_responses,
                                     const std::vector<std::string>& nocot_responses,
                                     const ConfidenceOptions& options) {
  if (cot_responses.size() != instances.size() || nocot_responses.size() != instances.size()) {
    throw ValidationError("misaligned inputs: " + std::to_string(instances.size()) +
                          " instances, " + std::to_string(cot_responses.size()) +
                          " CoT responses, " + std::to_string(nocot_responses.size()) +
                          " No-CoT responses");
  }
  ConfidenceReport report;
  report.records.resize(instances.size());

  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= instances.size()) return;
      try {
        const auto& inst = instances[i];
        std::vector<std::size_t> all(inst.questions.size());
        for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
        const auto gold = inst.gold();
        const auto pair = build_teacher_forced_pair(cot_responses[i], inst, all);
        ConfidenceRecord& r = report.records[i];
        r.instance_id = inst.id;
        r.fallback = pair.fallback;
        r.l_cot = mean_gold_logprob(scorer, pair.cot);
        r.l_nocot = mean_gold_logprob(scorer, pair.nocot);
        r.delta = r.l_cot - r.l_nocot;
        r.cot_correct = fully_correct(cot_responses[i], PromptMode::kCoT, gold);
        r.nocot_correct = fully_correct(nocot_responses[i], PromptMode::kNoCoT, gold);
        r.bucket = classify(r.nocot_correct, r.cot_correct);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        cursor = instances.size();
        return;
      }
    }
  };
  const std::size_t limit = std::max<std::size_t>(
      1, std::min({options.max_in_flight, scorer.capabilities().max_in_flight,
                   std::max<std::size_t>(instances.size(), 1)}));
  if (limit == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < limit; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::array<double, 4> sums{};
  for (const auto& r : report.records) {
    const auto k = static_cast<std::size_t>(r.bucket);
    report.buckets[k].n += 1;
    sums[k] += r.delta;
  }
  for (std::size_t k = 0; k < 4; ++k) {
    if (report.buckets[k].n > 0) {
      report.buckets[k].mean_delta = sums[k] / static_cast<double>(report.buckets[k].n);
    }
  }
  return report;
}

}  // namespace logictree::scorer
