// logictree: generate, verify, render, grade and score LogicTree data, and
// compute length-attenuated advantages from rollout files.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "logictree/drer/io.hpp"
#include "logictree/drer/kernel.hpp"
#include "logictree/error.hpp"
#include "logictree/grader/grader.hpp"
#include "logictree/scorer/http_client.hpp"
#include "logictree/scorer/teacher.hpp"
#include "logictree/surface/dataset.hpp"
#include "logictree/surface/prompt.hpp"
#include "logictree/treegen/profile.hpp"
#include "logictree/treegen/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;
using namespace logictree;

namespace {

constexpr const char* kRunSchema = "logictree.run/1";
constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitTransport = 2;

std::string g_command = "-";

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out + '"';
}

void log(std::string_view level, std::string_view msg,
         const std::vector<std::pair<std::string, std::string>>& fields = {}) {
  std::string line = "level=" + std::string(level) + " cmd=" + g_command + " msg=" + quote(msg);
  for (const auto& [k, v] : fields) line += " " + k + "=" + v;
  std::cerr << line << '\n';
}

// A file written under <path>.partial and renamed into place by commit().
// Left uncommitted it is renamed to <path>.quarantine.
class OutputFile {
 public:
  explicit OutputFile(fs::path path) : path_(std::move(path)) {
    if (path_.has_parent_path()) fs::create_directories(path_.parent_path());
    partial_ = path_;
    partial_ += ".partial";
    out_.open(partial_, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError("cannot open " + partial_.string() + " for writing");
  }
  OutputFile(const OutputFile&) = delete;
  OutputFile& operator=(const OutputFile&) = delete;
  ~OutputFile() {
    if (committed_) return;
    out_.close();
    std::error_code ec;
    fs::path q = path_;
    q += ".quarantine";
    fs::rename(partial_, q, ec);
  }

  std::ostream& stream() { return out_; }

  void commit() {
    out_.flush();
    if (!out_) throw IoError("write to " + partial_.string() + " failed");
    out_.close();
    fs::rename(partial_, path_);
    committed_ = true;
  }

 private:
  fs::path path_;
  fs::path partial_;
  std::ofstream out_;
  bool committed_ = false;
};

void write_snapshot(const fs::path& where, const std::vector<std::string>& args) {
  ordered_json j;
  j["schema"] = kRunSchema;
  j["command"] = args.empty() ? "" : args.front();
  j["cwd"] = fs::current_path().string();
  j["argv"] = args;
  OutputFile f(where);
  f.stream() << j.dump(2) << '\n';
  f.commit();
}

fs::path snapshot_next_to(const fs::path& output) {
  fs::path p = output;
  p += ".config.json";
  return p;
}

std::vector<int> parse_depths(const std::string& spec) {
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto dots = part.find("..");
    try {
      if (dots == std::string::npos) {
        out.push_back(std::stoi(part));
      } else {
        const int lo = std::stoi(part.substr(0, dots));
        const int hi = std::stoi(part.substr(dots + 2));
        if (lo > hi) throw ValidationError("empty depth range '" + part + "'");
        for (int d = lo; d <= hi; ++d) out.push_back(d);
      }
    } catch (const std::logic_error&) {
      throw ValidationError("bad depth list '" + spec + "'");
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (int d : out) {
    if (d < 1 || d > treegen::kMaxDepth) {
      throw ValidationError("depth " + std::to_string(d) + " outside 1..8");
    }
  }
  if (out.empty()) throw ValidationError("no depths given");
  return out;
}

std::array<int, 3> parse_ratios(const std::string& spec) {
  std::array<int, 3> r{};
  char c1 = 0;
  char c2 = 0;
  std::stringstream ss(spec);
  if (!(ss >> r[0] >> c1 >> r[1] >> c2 >> r[2]) || c1 != ':' || c2 != ':' || !ss.eof()) {
    throw ValidationError("ratios must look like 10:1:1, got '" + spec + "'");
  }
  return r;
}

std::vector<json> read_jsonl(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<json> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw ParseError(path.string() + ": " + e.what(), n);
    }
  }
  return out;
}

struct Response {
  std::string instance_id;
  std::optional<std::vector<std::size_t>> indices;
  std::string text;
};

std::vector<Response> read_responses(const fs::path& path) {
  std::vector<Response> out;
  std::size_t n = 0;
  for (const auto& j : read_jsonl(path)) {
    ++n;
    try {
      Response r;
      r.instance_id = j.at("instance_id").get<std::string>();
      r.text = j.at("response").get<std::string>();
      if (j.contains("question_indices")) {
        r.indices = j.at("question_indices").get<std::vector<std::size_t>>();
      }
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw ParseError(path.string() + ": response record: " + e.what(), n);
    }
  }
  return out;
}

std::map<std::string, const surface::Instance*> index_instances(
    const std::vector<surface::Instance>& instances) {
  std::map<std::string, const surface::Instance*> idx;
  for (const auto& inst : instances) idx.emplace(inst.id, &inst);
  return idx;
}

std::vector<std::size_t> all_indices(const surface::Instance& inst) {
  std::vector<std::size_t> out(inst.questions.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

const surface::Instance& lookup(const std::map<std::string, const surface::Instance*>& idx,
                                const std::string& id) {
  auto it = idx.find(id);
  if (it == idx.end()) throw ValidationError("response names unknown instance '" + id + "'");
  return *it->second;
}

// Endpoint flags shared by eval and analyze-confidence.
struct EndpointFlags {
  std::string url = "http://127.0.0.1:8000";
  std::string path;
  std::string model;
  int retries = 3;
  int backoff_ms = 200;
  int timeout_ms = 30000;
  std::size_t in_flight = 4;

  void add(CLI::App* cmd, const std::string& default_path) {
    path = default_path;
    cmd->add_option("--endpoint", url, "Base URL, scheme://host:port")->capture_default_str();
    cmd->add_option("--path", path, "Request path")->capture_default_str();
    cmd->add_option("--model", model, "Model name sent with requests");
    cmd->add_option("--retries", retries, "Retries after the first attempt")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--backoff-ms", backoff_ms, "Initial retry backoff")->capture_default_str();
    cmd->add_option("--timeout-ms", timeout_ms, "Per-request timeout")->capture_default_str();
    cmd->add_option("--in-flight", in_flight, "Concurrent requests")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  }

  scorer::HttpEndpointConfig config() const {
    scorer::HttpEndpointConfig c;
    c.base_url = url;
    c.path = path;
    c.model = model;
    c.max_retries = retries;
    c.initial_backoff = std::chrono::milliseconds(backoff_ms);
    c.timeout = std::chrono::milliseconds(timeout_ms);
    c.max_in_flight = in_flight;
    return c;
  }
};

// ---- gen -------------------------------------------------------------------

struct GenArgs {
  std::string depths = "1..8";
  int groups = 240;
  int variants = 5;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::string ratios = "10:1:1";
  std::string facts;
  std::string templates;
  std::string out;
};

int run_gen(const GenArgs& a, const std::vector<std::string>& args) {
  surface::GenerateOptions opts;
  opts.depths = parse_depths(a.depths);
  opts.groups_per_depth = a.groups;
  opts.variants = a.variants;
  opts.seed = a.seed;
  opts.jobs = std::max(1u, a.jobs);
  const auto ratios = parse_ratios(a.ratios);

  const fs::path data = surface::default_data_dir();
  const auto pool = surface::load_fact_pool(a.facts.empty() ? data / "facts.tsv" : fs::path(a.facts));
  const auto templates = surface::load_template_pool(
      a.templates.empty() ? data / "expressions.json" : fs::path(a.templates));
  log("info", "generating", {{"groups_per_depth", std::to_string(a.groups)},
                             {"variants", std::to_string(a.variants)},
                             {"seed", std::to_string(a.seed)},
                             {"facts", std::to_string(pool.size())}});
  const auto instances = surface::generate_dataset(opts, pool, templates);

  const fs::path out(a.out);
  fs::path staging = out;
  staging += ".partial";
  fs::path quarantine = out;
  quarantine += ".quarantine";
  fs::remove_all(staging);
  try {
    const auto manifest = surface::write_dataset(instances, ratios, a.seed, staging);
    write_snapshot(staging / "run_config.json", args);
    fs::create_directories(out);
    for (const auto& entry : fs::directory_iterator(staging)) {
      fs::rename(entry.path(), out / entry.path().filename());
    }
    fs::remove(staging);
    log("info", "wrote dataset",
        {{"out", quote(out.string())},
         {"instances", std::to_string(manifest.total_instances)},
         {"questions", std::to_string(manifest.total_questions)},
         {"train", std::to_string(manifest.splits[0].instances)},
         {"val", std::to_string(manifest.splits[1].instances)},
         {"test", std::to_string(manifest.splits[2].instances)}});
  } catch (...) {
    std::error_code ec;
    fs::remove_all(quarantine, ec);
    fs::rename(staging, quarantine, ec);
    throw;
  }
  return kExitOk;
}

// ---- verify ----------------------------------------------------------------

int run_verify(const std::vector<std::string>& files, const std::string& report_path,
               const std::vector<std::string>& args) {
  std::size_t checked = 0;
  std::size_t failed = 0;
  ordered_json failures = ordered_json::array();
  for (const auto& file : files) {
    const auto instances = surface::read_instances(file);
    for (const auto& inst : instances) {
      ++checked;
      const auto report = treegen::verify_instance(inst);
      if (report.passed()) continue;
      ++failed;
      ordered_json f;
      f["file"] = file;
      f["instance_id"] = report.instance_id;
      for (const auto& c : report.checks) {
        if (c.passed) continue;
        f["failed_checks"].push_back({{"check", c.name}, {"detail", c.detail}});
        std::cout << file << '\t' << report.instance_id << '\t' << c.name << '\t' << c.detail
                  << '\n';
      }
      f["failing_questions"] = report.failing_questions;
      failures.push_back(std::move(f));
    }
  }
  if (!report_path.empty()) {
    ordered_json j;
    j["checked"] = checked;
    j["failed"] = failed;
    j["failures"] = failures;
    OutputFile out(report_path);
    out.stream() << j.dump(2) << '\n';
    out.commit();
    write_snapshot(snapshot_next_to(report_path), args);
  }
  log(failed ? "error" : "info", failed ? "verification failed" : "all instances verified",
      {{"checked", std::to_string(checked)}, {"failed", std::to_string(failed)}});
  return failed ? kExitData : kExitOk;
}

// ---- render ----------------------------------------------------------------

int run_render(const std::string& input, const std::string& mode_name, bool per_question,
               const std::string& out_path, const std::vector<std::string>& args) {
  const auto mode = surface::prompt_mode_from(mode_name);
  const auto instances = surface::read_instances(input);
  OutputFile out(out_path);
  std::size_t n = 0;
  for (const auto& inst : instances) {
    std::vector<std::vector<std::size_t>> batches;
    if (per_question) {
      for (std::size_t i = 0; i < inst.questions.size(); ++i) batches.push_back({i});
    } else {
      batches.push_back(all_indices(inst));
    }
    for (const auto& idx : batches) {
      const auto p = surface::render_prompt(inst, idx, mode);
      ordered_json j;
      j["instance_id"] = inst.id;
      j["mode"] = surface::to_string(mode);
      j["num_q"] = p.num_q;
      j["question_indices"] = p.question_indices;
      j["prompt"] = p.text;
      out.stream() << j.dump() << '\n';
      ++n;
    }
  }
  out.commit();
  write_snapshot(snapshot_next_to(out_path), args);
  log("info", "rendered prompts", {{"prompts", std::to_string(n)}, {"out", quote(out_path)}});
  return kExitOk;
}

// ---- grade -----------------------------------------------------------------

struct GradeArgs {
  std::string input;
  std::string responses;
  std::string mode = "cot";
  std::string out;
  std::string metrics;
  double beta = 0.5;
  double min_answer_rate = 0.3;
};

int run_grade(const GradeArgs& a, const std::vector<std::string>& args) {
  const auto mode = surface::prompt_mode_from(a.mode);
  const auto instances = surface::read_instances(a.input);
  const auto idx = index_instances(instances);
  const auto responses = read_responses(a.responses);

  std::vector<grader::GradedQuestion> graded;
  OutputFile out(a.out);
  double reward_sum = 0;
  for (const auto& r : responses) {
    const auto& inst = lookup(idx, r.instance_id);
    const auto indices = r.indices.value_or(all_indices(inst));
    std::vector<logic::Verdict> gold;
    for (auto i : indices) {
      if (i >= inst.questions.size()) {
        throw ValidationError("question index " + std::to_string(i) + " out of range for " +
                              inst.id);
      }
      gold.push_back(inst.questions[i].label);
    }
    const auto parsed = grader::parse_response(r.text, static_cast<int>(indices.size()), mode);
    const auto reward = grader::task_reward(parsed, gold);
    reward_sum += reward.r_task;
    const auto qs = grader::grade_questions(parsed, inst.id, inst.depth, inst.group_id, gold, indices);
    graded.insert(graded.end(), qs.begin(), qs.end());

    ordered_json j;
    j["instance_id"] = inst.id;
    j["question_indices"] = indices;
    j["found"] = parsed.found;
    j["parseable"] = parsed.parseable;
    j["format_ok"] = parsed.format_ok;
    j["predicted"] = parsed.parseable ? grader::format_labels(parsed.labels) : "";
    j["gold"] = grader::format_labels(gold);
    j["s_format"] = reward.s_format;
    j["s_answer"] = reward.s_answer;
    j["r_task"] = reward.r_task;
    out.stream() << j.dump() << '\n';
  }
  out.commit();

  grader::MetricsOptions mo;
  mo.beta = a.beta;
  mo.min_answer_rate = a.min_answer_rate;
  const auto report = grader::compute_metrics(graded, mo);
  if (!a.metrics.empty()) {
    OutputFile m(a.metrics);
    m.stream() << report.to_json() << '\n';
    m.commit();
  }
  std::cout << report.to_table();
  write_snapshot(snapshot_next_to(a.out), args);
  log("info", "graded",
      {{"responses", std::to_string(responses.size())},
       {"questions", std::to_string(graded.size())},
       {"mean_r_task",
        std::to_string(responses.empty() ? 0.0 : reward_sum / static_cast<double>(responses.size()))}});
  return kExitOk;
}

// ---- eval ------------------------------------------------------------------

int run_eval(const std::string& prompts_path, const EndpointFlags& ep, int max_tokens,
             double temperature, const std::string& out_path, const std::vector<std::string>& args) {
  const auto prompts = read_jsonl(prompts_path);
  scorer::HttpTextGenerator gen(ep.config(), max_tokens, temperature);

  std::vector<std::string> lines(prompts.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (std::size_t i = next++; i < prompts.size(); i = next++) {
      {
        std::lock_guard lock(err_mu);
        if (first_error) return;
      }
      try {
        const auto& p = prompts[i];
        const auto call = gen.generate(p.at("prompt").get<std::string>());
        ordered_json j;
        j["instance_id"] = p.at("instance_id");
        j["mode"] = p.value("mode", "cot");
        j["question_indices"] = p.at("question_indices");
        j["response"] = call.text;
        j["attempts"] = call.attempts;
        lines[i] = j.dump();
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t n_threads = std::min<std::size_t>(ep.in_flight, std::max<std::size_t>(1, prompts.size()));
  for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  OutputFile out(out_path);
  if (first_error) std::rethrow_exception(first_error);
  for (const auto& l : lines) out.stream() << l << '\n';
  out.commit();
  write_snapshot(snapshot_next_to(out_path), args);
  log("info", "collected responses", {{"responses", std::to_string(lines.size())}});
  return kExitOk;
}

// ---- bounds ----------------------------------------------------------------

int run_bounds(const std::string& rollouts_path, std::size_t min_samples, std::int64_t step,
               const std::string& previous_path, const std::string& out_path,
               const std::vector<std::string>& args) {
  std::ifstream in(rollouts_path);
  if (!in) throw IoError("cannot open " + rollouts_path);
  const auto samples = drer::to_validation_samples(drer::read_rollouts(in));
  std::optional<drer::LengthBounds> previous;
  if (!previous_path.empty()) {
    std::ifstream p(previous_path);
    if (!p) throw IoError("cannot open " + previous_path);
    std::stringstream ss;
    ss << p.rdbuf();
    previous = drer::bounds_from_json(ss.str());
  }
  const auto bounds =
      drer::estimate_bounds(samples, min_samples, step, previous ? &*previous : nullptr);
  OutputFile out(out_path);
  out.stream() << drer::bounds_to_json(bounds) << '\n';
  out.commit();
  write_snapshot(snapshot_next_to(out_path), args);
  std::size_t enabled = 0;
  for (const auto& [_, b] : bounds.buckets) enabled += b.disabled ? 0 : 1;
  log("info", "estimated bounds",
      {{"samples", std::to_string(samples.size())},
       {"buckets", std::to_string(bounds.buckets.size())},
       {"enabled", std::to_string(enabled)}});
  return kExitOk;
}

// ---- advantage -------------------------------------------------------------

int run_advantage(const std::string& rollouts_path, const std::string& bounds_path,
                  const drer::KernelConfig& config, const std::string& out_path,
                  const std::vector<std::string>& args) {
  config.validate();
  if (!config.tau_in_recommended_range()) {
    log("warn", "tau outside the recommended range [5, 10]", {{"tau", std::to_string(config.tau)}});
  }
  std::ifstream in(rollouts_path);
  if (!in) throw IoError("cannot open " + rollouts_path);
  const auto groups = drer::group_by_prompt(drer::read_rollouts(in));
  drer::LengthBounds bounds;
  if (!bounds_path.empty()) {
    std::ifstream b(bounds_path);
    if (!b) throw IoError("cannot open " + bounds_path);
    std::stringstream ss;
    ss << b.rdbuf();
    bounds = drer::bounds_from_json(ss.str());
  }
  OutputFile out(out_path);
  std::size_t skipped = 0;
  for (const auto& g : groups) {
    const auto results = drer::compute_advantages(g, bounds, config);
    if (!results.empty() && results.front().skipped) ++skipped;
    drer::write_advantages(out.stream(), g.front().prompt_id, results);
  }
  out.commit();
  write_snapshot(snapshot_next_to(out_path), args);
  log("info", "computed advantages",
      {{"groups", std::to_string(groups.size())}, {"skipped", std::to_string(skipped)}});
  return kExitOk;
}

// ---- analyze-confidence ----------------------------------------------------

struct ConfidenceArgs {
  std::string input;
  std::string cot;
  std::string nocot;
  std::string scorer = "mock";
  std::vector<std::string> bonus;
  double alpha = 1.0;
  bool echo = false;
  std::string out;
};

int run_confidence(const ConfidenceArgs& a, const EndpointFlags& ep,
                   const std::vector<std::string>& args) {
  const auto instances = surface::read_instances(a.input);
  const auto idx = index_instances(instances);
  const auto cot = read_responses(a.cot);
  const auto nocot = read_responses(a.nocot);
  std::map<std::string, std::string> nocot_by_id;
  for (const auto& r : nocot) nocot_by_id[r.instance_id] = r.text;

  std::vector<surface::Instance> picked;
  std::vector<std::string> cot_texts;
  std::vector<std::string> nocot_texts;
  for (const auto& r : cot) {
    auto it = nocot_by_id.find(r.instance_id);
    if (it == nocot_by_id.end()) {
      throw ValidationError("no No-CoT response for " + r.instance_id);
    }
    picked.push_back(lookup(idx, r.instance_id));
    cot_texts.push_back(r.text);
    nocot_texts.push_back(it->second);
  }

  std::unique_ptr<scorer::Scorer> s;
  if (a.scorer == "mock") {
    std::map<std::string, double> bonus;
    for (const auto& b : a.bonus) {
      const auto eq = b.rfind('=');
      if (eq == std::string::npos) throw ValidationError("--bonus wants MARKER=VALUE, got '" + b + "'");
      try {
        bonus[b.substr(0, eq)] = std::stod(b.substr(eq + 1));
      } catch (const std::logic_error&) {
        throw ValidationError("bad bonus value in '" + b + "'");
      }
    }
    s = std::make_unique<scorer::MockTrigramScorer>(a.alpha, bonus);
  } else if (a.scorer == "http") {
    auto c = ep.config();
    c.protocol = a.echo ? scorer::HttpProtocol::kCompletionsEcho : scorer::HttpProtocol::kScore;
    s = std::make_unique<scorer::HttpScoreClient>(c);
  } else {
    throw ValidationError("unknown scorer '" + a.scorer + "' (mock or http)");
  }

  scorer::ConfidenceOptions opts;
  opts.max_in_flight = ep.in_flight;
  const auto report = scorer::confidence_analysis(*s, picked, cot_texts, nocot_texts, opts);
  OutputFile out(a.out);
  out.stream() << report.to_json() << '\n';
  out.commit();
  write_snapshot(snapshot_next_to(a.out), args);
  for (auto t : {scorer::Transition::kWR, scorer::Transition::kRR, scorer::Transition::kWW,
                 scorer::Transition::kRW}) {
    const auto& b = report.buckets[static_cast<std::size_t>(t)];
    std::printf("%s\tn=%zu\tmean_delta=%.6f\n", std::string(scorer::to_string(t)).c_str(), b.n,
                b.mean_delta);
  }
  log("info", "scored samples", {{"samples", std::to_string(report.records.size())}});
  return kExitOk;
}

// ---- wordfreq --------------------------------------------------------------

int run_wordfreq(const std::string& responses_path, const std::string& out_path,
                 const std::vector<std::string>& args) {
  std::vector<std::string> texts;
  for (auto& r : read_responses(responses_path)) texts.push_back(std::move(r.text));
  const auto counts = grader::paradigm_word_freq(texts);
  ordered_json j;
  j["responses"] = texts.size();
  j["counts"] = ordered_json::object();
  for (std::size_t i = 0; i < logic::kAllRules.size(); ++i) {
    const std::string name(logic::display_name(logic::kAllRules[i]));
    j["counts"][name] = counts[i];
    std::printf("%s\t%zu\n", name.c_str(), counts[i]);
  }
  if (!out_path.empty()) {
    OutputFile out(out_path);
    out.stream() << j.dump(2) << '\n';
    out.commit();
    write_snapshot(snapshot_next_to(out_path), args);
  }
  return kExitOk;
}

int dispatch(std::vector<std::string> args);

// ---- replay ----------------------------------------------------------------

int run_replay(const std::string& snapshot) {
  std::ifstream in(snapshot);
  if (!in) throw IoError("cannot open " + snapshot);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(snapshot + ": " + e.what());
  }
  if (j.value("schema", "") != kRunSchema) throw ValidationError(snapshot + " is not a run snapshot");
  const auto argv = j.at("argv").get<std::vector<std::string>>();
  if (argv.empty() || argv.front() == "replay") throw ValidationError("snapshot has no command to replay");
  const fs::path cwd = j.at("cwd").get<std::string>();
  const fs::path here = fs::current_path();
  fs::current_path(cwd);
  log("info", "replaying", {{"command", argv.front()}, {"cwd", quote(cwd.string())}});
  int rc = kExitData;
  try {
    rc = dispatch(argv);
  } catch (...) {
    fs::current_path(here);
    throw;
  }
  fs::current_path(here);
  return rc;
}

// ---- dispatch --------------------------------------------------------------

int dispatch(std::vector<std::string> args) {
  CLI::App app{"LogicTree benchmark and reward tools", "logictree"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* c_gen = app.add_subcommand("gen", "Generate a dataset with group-atomic splits");
  c_gen->add_option("--depth,--depths", gen.depths, "Depths: 3, 1..8 or 1,4,6")->capture_default_str();
  c_gen->add_option("--groups", gen.groups, "Groups per depth")->capture_default_str()->check(CLI::PositiveNumber);
  c_gen->add_option("--variants", gen.variants, "Variants per group")->capture_default_str()->check(CLI::Range(2, 64));
  c_gen->add_option("--seed", gen.seed, "Run seed")->capture_default_str();
  c_gen->add_option("--jobs", gen.jobs, "Worker threads")->capture_default_str();
  c_gen->add_option("--ratios", gen.ratios, "train:val:test")->capture_default_str();
  c_gen->add_option("--facts", gen.facts, "Fact pool (id<TAB>text)");
  c_gen->add_option("--templates", gen.templates, "Template pool JSON");
  c_gen->add_option("--out", gen.out, "Output directory")->required();

  std::vector<std::string> verify_files;
  std::string verify_report;
  auto* c_verify = app.add_subcommand("verify", "Re-check instances against the oracle and tree");
  c_verify->add_option("files", verify_files, "Instance files")->required();
  c_verify->add_option("--report", verify_report, "Write a JSON report here");

  std::string r_input;
  std::string r_mode = "cot";
  bool r_per_question = false;
  std::string r_out;
  auto* c_render = app.add_subcommand("render", "Render prompts for instances");
  c_render->add_option("--input", r_input, "Instance file")->required();
  c_render->add_option("--mode", r_mode, "cot or nocot")->capture_default_str();
  c_render->add_flag("--per-question", r_per_question, "One prompt per question");
  c_render->add_option("--out", r_out, "Prompt file")->required();

  GradeArgs grade;
  auto* c_grade = app.add_subcommand("grade", "Grade responses and compute metrics");
  c_grade->add_option("--input", grade.input, "Instance file")->required();
  c_grade->add_option("--responses", grade.responses, "Response file")->required();
  c_grade->add_option("--mode", grade.mode, "cot or nocot")->capture_default_str();
  c_grade->add_option("--out", grade.out, "Per-response grades")->required();
  c_grade->add_option("--metrics", grade.metrics, "Metrics JSON");
  c_grade->add_option("--beta", grade.beta, "F-beta weight")->capture_default_str();
  c_grade->add_option("--min-answer-rate", grade.min_answer_rate, "F-beta answer-rate floor")
      ->capture_default_str();

  std::string e_prompts;
  std::string e_out;
  int e_max_tokens = 2048;
  double e_temperature = 0.0;
  EndpointFlags eval_ep;
  auto* c_eval = app.add_subcommand("eval", "Query a completions endpoint with rendered prompts");
  c_eval->add_option("--prompts", e_prompts, "Prompt file from render")->required();
  c_eval->add_option("--out", e_out, "Response file")->required();
  c_eval->add_option("--max-tokens", e_max_tokens)->capture_default_str();
  c_eval->add_option("--temperature", e_temperature)->capture_default_str();
  eval_ep.add(c_eval, "/v1/completions");

  std::string b_rollouts;
  std::size_t b_min = 20;
  std::int64_t b_step = 0;
  std::string b_previous;
  std::string b_out;
  auto* c_bounds = app.add_subcommand("bounds", "Estimate per-bucket length bounds");
  c_bounds->add_option("--rollouts", b_rollouts, "Validation rollouts")->required();
  c_bounds->add_option("--min-samples", b_min)->capture_default_str();
  c_bounds->add_option("--step", b_step, "Training step recorded with the bounds")->capture_default_str();
  c_bounds->add_option("--previous", b_previous, "Bounds from the previous round");
  c_bounds->add_option("--out", b_out, "Bounds JSON")->required();

  std::string a_rollouts;
  std::string a_bounds;
  std::string a_out;
  drer::KernelConfig kc;
  auto* c_adv = app.add_subcommand("advantage", "Compute attenuated group advantages");
  c_adv->add_option("--rollouts", a_rollouts, "Rollout file")->required();
  c_adv->add_option("--bounds", a_bounds, "Bounds JSON; none disables attenuation");
  c_adv->add_option("--tau", kc.tau)->capture_default_str();
  c_adv->add_option("--lambda-q", kc.lambda_q)->capture_default_str();
  c_adv->add_option("--eps", kc.eps)->capture_default_str();
  c_adv->add_flag("--dapo-filter", kc.dapo_filter, "Skip groups that agree on correctness");
  c_adv->add_option("--out", a_out, "Advantage records")->required();

  ConfidenceArgs conf;
  EndpointFlags conf_ep;
  auto* c_conf = app.add_subcommand("analyze-confidence",
                                    "Teacher-forced CoT versus No-CoT confidence on gold answers");
  c_conf->add_option("--input", conf.input, "Instance file")->required();
  c_conf->add_option("--cot", conf.cot, "CoT responses")->required();
  c_conf->add_option("--nocot", conf.nocot, "No-CoT responses")->required();
  c_conf->add_option("--scorer", conf.scorer, "mock or http")->capture_default_str();
  c_conf->add_option("--bonus", conf.bonus, "Mock marker bonus, MARKER=VALUE");
  c_conf->add_option("--alpha", conf.alpha, "Mock smoothing")->capture_default_str();
  c_conf->add_flag("--echo", conf.echo, "Use a completions endpoint with echo");
  c_conf->add_option("--out", conf.out, "Report JSON")->required();
  conf_ep.add(c_conf, "/v1/score");

  std::string w_responses;
  std::string w_out;
  auto* c_word = app.add_subcommand("wordfreq", "Count paradigm names in responses");
  c_word->add_option("--responses", w_responses, "Response file")->required();
  c_word->add_option("--out", w_out, "Counts JSON");

  std::string replay_file;
  auto* c_replay = app.add_subcommand("replay", "Re-run a command from its config snapshot");
  c_replay->add_option("snapshot", replay_file, "Snapshot JSON")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitData;
  }

  const auto* cmd = app.get_subcommands().front();
  g_command = cmd->get_name();
  if (cmd == c_gen) return run_gen(gen, args);
  if (cmd == c_verify) return run_verify(verify_files, verify_report, args);
  if (cmd == c_render) return run_render(r_input, r_mode, r_per_question, r_out, args);
  if (cmd == c_grade) return run_grade(grade, args);
  if (cmd == c_eval) return run_eval(e_prompts, eval_ep, e_max_tokens, e_temperature, e_out, args);
  if (cmd == c_bounds) return run_bounds(b_rollouts, b_min, b_step, b_previous, b_out, args);
  if (cmd == c_adv) return run_advantage(a_rollouts, a_bounds, kc, a_out, args);
  if (cmd == c_conf) return run_confidence(conf, conf_ep, args);
  if (cmd == c_word) return run_wordfreq(w_responses, w_out, args);
  if (cmd == c_replay) return run_replay(replay_file);
  return kExitData;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return dispatch(std::move(args));
  } catch (const TransportError& e) {
    log("error", e.what(), {{"attempts", std::to_string(e.attempts())}});
    return kExitTransport;
  } catch (const std::exception& e) {
    log("error", e.what());
    return kExitData;
  }
}
