#include "logictree/grader/grader.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>
#include <sstream>

#include "json.hpp"
#include "logictree/error.hpp"
#include "logictree/logic/rules.hpp"

namespace logictree::grader {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s, std::string_view chars = " \t\r\n") {
  const auto b = s.find_first_not_of(chars);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(chars);
  return s.substr(b, e - b + 1);
}

std::optional<Verdict> token_verdict(std::string_view tok) {
  const std::string t = lower(trim(tok, " \t\r\n'\"`.*"));
  if (t == "true") return Verdict::kTrue;
  if (t == "false") return Verdict::kFalse;
  if (t == "unknown") return Verdict::kUnknown;
  return std::nullopt;
}

}  // namespace

ParsedAnswer parse_response(std::string_view text, int num_q, PromptMode mode) {
  if (num_q < 1) throw PreconditionError("num_q must be >= 1");
  ParsedAnswer out;
  out.expected = num_q;

  const std::string low = lower(text);
  static constexpr std::string_view kOpen = "<answer>";
  static constexpr std::string_view kClose = "</answer>";
  const auto close = low.rfind(kClose);
  if (close == std::string::npos) return out;
  const auto open = low.rfind(kOpen, close);
  if (open == std::string::npos) return out;

  out.found = true;
  out.block_begin = open;
  out.block_end = close + kClose.size();
  out.content_begin = open + kOpen.size();
  out.content_end = close;

  if (mode == PromptMode::kNoCoT) {
    out.format_ok = true;
  } else {
    const auto think_close = low.rfind("</think>", open);
    out.format_ok = think_close != std::string::npos;
  }

  std::string_view body = trim(text.substr(out.content_begin, out.content_end - out.content_begin));
  if (!body.empty() && body.front() == '[') body.remove_prefix(1);
  if (!body.empty() && body.back() == ']') body.remove_suffix(1);
  body = trim(body);
  if (body.empty()) return out;

  std::vector<Verdict> labels;
  std::size_t start = 0;
  for (;;) {
    const auto comma = body.find(',', start);
    const auto piece = body.substr(start, comma == std::string_view::npos
                                              ? std::string_view::npos
                                              : comma - start);
    const auto v = token_verdict(piece);
    if (!v) return out;
    labels.push_back(*v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  out.parseable = true;
  out.labels = std::move(labels);
  return out;
}

RewardBreakdown task_reward(const ParsedAnswer& parsed, std::span<const Verdict> gold) {
  for (Verdict g : gold) {
    if (g == Verdict::kUnknown) throw PreconditionError("gold labels must be True or False");
  }
  RewardBreakdown r;
  r.s_format = parsed.format_ok ? kFormatOk : kFormatBad;
  const bool comparable = parsed.parseable && parsed.labels.size() == gold.size();
  if (!comparable) {
    r.s_answer = kAnswerInvalid;
  } else if (parsed.format_ok &&
             std::equal(parsed.labels.begin(), parsed.labels.end(), gold.begin())) {
    r.s_answer = kAnswerMatch;
  } else {
    r.s_answer = kAnswerMismatch;
  }
  r.r_task = r.s_format + r.s_answer;
  return r;
}

std::string format_labels(std::span<const Verdict> labels) {
  std::string out = "[";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ", ";
    out += logic::to_string(labels[i]);
  }
  out += ']';
  return out;
}

std::vector<GradedQuestion> grade_questions(const ParsedAnswer& parsed,
                                            std::string_view instance_id, int depth,
                                            int group_id, std::span<const Verdict> gold,
                                            std::span<const std::size_t> question_indices) {
  if (gold.size() != question_indices.size()) {
    throw ValidationError("gold and question index lists differ in length");
  }
  const bool usable = parsed.parseable && parsed.labels.size() == gold.size();
  std::vector<GradedQuestion> out;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    GradedQuestion g;
    g.instance_id = std::string(instance_id);
    g.question_idx = question_indices[i];
    g.depth = depth;
    g.group_id = group_id;
    g.gold = gold[i];
    if (usable) g.predicted = parsed.labels[i];
    out.push_back(std::move(g));
  }
  return out;
}

double f_beta(double precision, double answer_rate, double beta, double min_answer_rate) {
  if (answer_rate <= min_answer_rate) return 0.0;
  const double b2 = beta * beta;
  const double denom = b2 * precision + answer_rate;
  if (denom <= 0.0) return 0.0;
  return (1.0 + b2) * precision * answer_rate / denom;
}

namespace {

void finish(MetricCell& c, const MetricsOptions& o) {
  const double total = static_cast<double>(c.total);
  c.accuracy = total > 0 ? static_cast<double>(c.correct) / total : 0.0;
  c.answer_rate = total > 0 ? static_cast<double>(c.valid) / total : 0.0;
  c.precision_undefined = c.valid == 0;
  c.precision = c.valid > 0 ? static_cast<double>(c.correct) / static_cast<double>(c.valid) : 0.0;
  c.f_beta = f_beta(c.precision, c.answer_rate, o.beta, o.min_answer_rate);
  c.consistency_ratio =
      c.groups > 0 ? static_cast<double>(c.consistent_groups) / static_cast<double>(c.groups) : 0.0;
}

}  // namespace

MetricsReport compute_metrics(std::span<const GradedQuestion> records,
                              const MetricsOptions& options) {
  if (records.empty()) throw ValidationError("no graded records");
  MetricsReport report;
  report.options = options;
  report.consistency_rule =
      "a group counts as consistent only when every question of every variant "
      "is answered correctly";

  std::map<int, bool> group_ok;
  std::map<int, int> group_depth;
  for (const auto& r : records) {
    if (r.depth < 1 || r.depth > 8) {
      throw ValidationError("record " + r.instance_id + " has depth " +
                            std::to_string(r.depth) + " outside [1, 8]");
    }
    auto [it, fresh] = group_depth.emplace(r.group_id, r.depth);
    if (!fresh && it->second != r.depth) {
      throw ValidationError("group " + std::to_string(r.group_id) + " spans several depths");
    }
    MetricCell& cell = report.by_depth[r.depth];
    for (MetricCell* c : {&cell, &report.overall}) {
      c->total += 1;
      c->valid += r.valid() ? 1 : 0;
      c->correct += r.correct() ? 1 : 0;
    }
    auto [g, _] = group_ok.emplace(r.group_id, true);
    g->second = g->second && r.correct();
  }
  for (const auto& [gid, ok] : group_ok) {
    MetricCell& cell = report.by_depth[group_depth[gid]];
    for (MetricCell* c : {&cell, &report.overall}) {
      c->groups += 1;
      c->consistent_groups += ok ? 1 : 0;
    }
  }
  for (auto& [d, cell] : report.by_depth) finish(cell, options);
  finish(report.overall, options);

  MetricCell& avg = report.average;
  const double n = static_cast<double>(report.by_depth.size());
  for (const auto& [d, c] : report.by_depth) {
    avg.total += c.total;
    avg.valid += c.valid;
    avg.correct += c.correct;
    avg.groups += c.groups;
    avg.consistent_groups += c.consistent_groups;
    avg.accuracy += c.accuracy / n;
    avg.answer_rate += c.answer_rate / n;
    avg.precision += c.precision / n;
    avg.f_beta += c.f_beta / n;
    avg.consistency_ratio += c.consistency_ratio / n;
    avg.precision_undefined = avg.precision_undefined || c.precision_undefined;
  }
  return report;
}

namespace {

nlohmann::ordered_json cell_json(const MetricCell& c) {
  return {{"total", c.total},
          {"valid", c.valid},
          {"correct", c.correct},
          {"groups", c.groups},
          {"consistent_groups", c.consistent_groups},
          {"accuracy", c.accuracy},
          {"answer_rate", c.answer_rate},
          {"precision", c.precision},
          {"precision_undefined", c.precision_undefined},
          {"f_beta", c.f_beta},
          {"consistency_ratio", c.consistency_ratio}};
}

}  // namespace

std::string MetricsReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = "logictree.metrics/1";
  j["beta"] = options.beta;
  j["min_answer_rate"] = options.min_answer_rate;
  j["consistency_rule"] = consistency_rule;
  nlohmann::ordered_json depths = nlohmann::ordered_json::object();
  for (const auto& [d, c] : by_depth) depths[std::to_string(d)] = cell_json(c);
  j["by_depth"] = std::move(depths);
  j["avg"] = cell_json(average);
  j["overall"] = cell_json(overall);
  return j.dump(2) + "\n";
}

std::string MetricsReport::to_table() const {
  std::ostringstream os;
  os << "# consistency: " << consistency_rule << "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "# f_beta: beta=%.2f, zero when answer_rate <= %.2f\n",
                options.beta, options.min_answer_rate);
  os << buf;
  os << "metric      ";
  for (int d = 1; d <= 8; ++d) {
    std::snprintf(buf, sizeof buf, "%7d", d);
    os << buf;
  }
  os << "    Avg\n";
  const auto row = [&](const char* name, double MetricCell::*field) {
    std::snprintf(buf, sizeof buf, "%-12s", name);
    os << buf;
    for (int d = 1; d <= 8; ++d) {
      auto it = by_depth.find(d);
      if (it == by_depth.end()) {
        os << "      -";
      } else {
        std::snprintf(buf, sizeof buf, "%7.2f", it->second.*field);
        os << buf;
      }
    }
    std::snprintf(buf, sizeof buf, "%7.2f\n", average.*field);
    os << buf;
  };
  row("accuracy", &MetricCell::accuracy);
  row("consistency", &MetricCell::consistency_ratio);
  row("answer_rate", &MetricCell::answer_rate);
  row("precision", &MetricCell::precision);
  row("f_beta", &MetricCell::f_beta);
  char line[256];
  std::snprintf(line, sizeof line,
                "overall: n=%zu accuracy=%.4f answer_rate=%.4f precision=%.4f%s "
                "f_beta=%.4f consistency=%.4f\n",
                overall.total, overall.accuracy, overall.answer_rate, overall.precision,
                overall.precision_undefined ? " (undefined)" : "", overall.f_beta,
                overall.consistency_ratio);
  os << line;
  return os.str();
}

std::array<std::size_t, 7> paradigm_word_freq(std::span<const std::string> responses) {
  std::array<std::size_t, 7> counts{};
  std::array<std::string, 7> needles;
  for (std::size_t i = 0; i < 7; ++i) needles[i] = lower(logic::display_name(logic::kAllRules[i]));
  for (const auto& text : responses) {
    const std::string low = lower(text);
    for (std::size_t i = 0; i < 7; ++i) {
      for (auto pos = low.find(needles[i]); pos != std::string::npos;
           pos = low.find(needles[i], pos + needles[i].size())) {
        ++counts[i];
      }
    }
  }
  return counts;
}

}  // namespace logictree::grader
