#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

#include "json.hpp"
#include "logictree/grader/grader.hpp"
#include "logictree/surface/instance.hpp"
#include "stub_server.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using testing_support::slurp;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run cli(const fs::path& cwd, const std::string& args) {
  const fs::path out = cwd / "stdout.txt";
  const fs::path err = cwd / "stderr.txt";
  const std::string cmd = "cd '" + cwd.string() + "' && '" LOGICTREE_CLI "' " + args + " >'" +
                          out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

// Dataset shared by the tests below; generated once.
const fs::path& dataset() {
  static const fs::path dir = [] {
    auto d = testing_support::scratch_dir("cli-data");
    const auto r = cli(d, "gen --depth 1..3 --groups 12 --variants 5 --seed 4 --out ds");
    EXPECT_EQ(r.code, 0) << r.err;
    return d;
  }();
  return dir;
}

std::string gold_responses(const fs::path& instances, bool cot) {
  std::string out;
  for (const auto& inst : logictree::surface::read_instances(instances)) {
    json j;
    j["instance_id"] = inst.id;
    j["response"] = std::string(cot ? "<think> Therefore it follows. </think>\n" : "") + "<answer>" +
                    logictree::grader::format_labels(inst.gold()) + "</answer>";
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace

TEST(Cli, UsageErrors) {
  const auto dir = testing_support::scratch_dir("cli-usage");
  auto r = cli(dir, "");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("Subcommands"), std::string::npos);
  r = cli(dir, "frobnicate");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(cli(dir, "--help").code, 0);
  EXPECT_EQ(cli(dir, "gen --out x --depth 0..2").code, 1);
  EXPECT_EQ(cli(dir, "verify missing.jsonl").code, 1);
}

TEST(Cli, GenWritesDatasetManifestAndSnapshot) {
  const auto& d = dataset();
  for (const char* f : {"train.jsonl", "val.jsonl", "test.jsonl", "manifest.json", "run_config.json"}) {
    EXPECT_TRUE(fs::exists(d / "ds" / f)) << f;
  }
  const auto manifest = json::parse(slurp(d / "ds" / "manifest.json"));
  EXPECT_EQ(manifest["total_instances"], 180);
  EXPECT_EQ(manifest["splits"]["train"]["groups"], 30);
  EXPECT_EQ(manifest["splits"]["val"]["groups"], 3);
  EXPECT_FALSE(fs::exists(d / "ds.partial"));
  const auto snap = json::parse(slurp(d / "ds" / "run_config.json"));
  EXPECT_EQ(snap["command"], "gen");
}

TEST(Cli, GenIsByteIdenticalAndReplayable) {
  const auto& d = dataset();
  const auto other = testing_support::scratch_dir("cli-data2");
  ASSERT_EQ(cli(other, "gen --depth 1..3 --groups 12 --variants 5 --seed 4 --jobs 3 --out ds").code, 0);
  for (const char* f : {"train.jsonl", "val.jsonl", "test.jsonl", "manifest.json"}) {
    EXPECT_EQ(slurp(d / "ds" / f), slurp(other / "ds" / f)) << f;
  }
  const std::string before = slurp(other / "ds" / "train.jsonl");
  fs::remove(other / "ds" / "train.jsonl");
  const auto r = cli(other, "replay ds/run_config.json");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(other / "ds" / "train.jsonl"), before);
}

TEST(Cli, VerifyCleanAndMutated) {
  const auto& d = dataset();
  auto r = cli(d, "verify ds/test.jsonl ds/val.jsonl");
  EXPECT_EQ(r.code, 0) << r.err;

  auto lines = slurp(d / "ds" / "test.jsonl");
  auto first = json::parse(lines.substr(0, lines.find('\n')));
  auto& label = first["questions"][0]["label"];
  label = label == "True" ? "False" : "True";
  write(d / "mutated.jsonl", first.dump() + "\n" + lines.substr(lines.find('\n') + 1));
  r = cli(d, "verify mutated.jsonl --report report.json");
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.out.find("labels"), std::string::npos);
  EXPECT_NE(r.out.find(first["id"].get<std::string>()), std::string::npos);
  const auto report = json::parse(slurp(d / "report.json"));
  EXPECT_EQ(report["failed"], 1);
  EXPECT_EQ(report["failures"][0]["failing_questions"], json::array({0}));
}

TEST(Cli, RenderGradeWordfreq) {
  const auto& d = dataset();
  auto r = cli(d, "render --input ds/test.jsonl --mode cot --out prompts.jsonl");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto prompts = slurp(d / "prompts.jsonl");
  EXPECT_EQ(std::count(prompts.begin(), prompts.end(), '\n'), 15);
  EXPECT_NE(prompts.find("<think>"), std::string::npos);
  EXPECT_TRUE(fs::exists(d / "prompts.jsonl.config.json"));

  r = cli(d, "render --input ds/test.jsonl --mode nocot --per-question --out pq.jsonl");
  ASSERT_EQ(r.code, 0) << r.err;

  write(d / "responses.jsonl", gold_responses(d / "ds" / "test.jsonl", true));
  r = cli(d, "grade --input ds/test.jsonl --responses responses.jsonl --out graded.jsonl --metrics metrics.json");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto metrics = json::parse(slurp(d / "metrics.json"));
  EXPECT_EQ(metrics["overall"]["accuracy"], 1.0);
  EXPECT_EQ(metrics["overall"]["consistency_ratio"], 1.0);
  EXPECT_NE(r.out.find("Avg"), std::string::npos);
  const auto graded = slurp(d / "graded.jsonl");
  EXPECT_NE(graded.find("\"r_task\":3.0"), std::string::npos);

  write(d / "words.jsonl", R"({"instance_id":"x","response":"By Modus Ponens and modus ponens."})" "\n");
  r = cli(d, "wordfreq --responses words.jsonl --out words.json");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(slurp(d / "words.json"))["counts"]["Modus Ponens"], 2);
}

TEST(Cli, BoundsAdvantageAndReplay) {
  const auto dir = testing_support::scratch_dir("cli-adv");
  std::string val;
  for (int i = 1; i <= 40; ++i) {
    val += json({{"prompt_id", "v" + std::to_string(i)}, {"bucket", 0}, {"length", 100 + 10 * i},
                 {"r_task", 3}, {"l_cot", -1}, {"l_nocot", -1}})
               .dump() +
           "\n";
  }
  write(dir / "val.jsonl", val);
  auto r = cli(dir, "bounds --rollouts val.jsonl --min-samples 20 --step 10 --out b.json");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto b = json::parse(slurp(dir / "b.json"));
  EXPECT_EQ(b["buckets"][0]["l_min"], 120.0);
  EXPECT_EQ(b["buckets"][0]["l_max"], 480.0);

  std::string roll;
  const double rewards[] = {3, -0.5, -3, 3};
  for (int g = 0; g < 3; ++g) {
    for (int m = 0; m < 4; ++m) {
      roll += json({{"prompt_id", "p" + std::to_string(g)}, {"bucket", 0}, {"length", 200 + 150 * m},
                    {"r_task", rewards[m]}, {"l_cot", -0.5 * m}, {"l_nocot", -1.0}})
                  .dump() +
              "\n";
    }
  }
  write(dir / "r.jsonl", roll);
  r = cli(dir, "advantage --rollouts r.jsonl --bounds b.json --tau 8 --lambda-q 1 --out adv.jsonl");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto adv = slurp(dir / "adv.jsonl");
  EXPECT_EQ(std::count(adv.begin(), adv.end(), '\n'), 12);
  EXPECT_NE(r.err.find("level=info"), std::string::npos);

  const auto before = adv;
  fs::remove(dir / "adv.jsonl");
  r = cli(dir, "replay adv.jsonl.config.json");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(dir / "adv.jsonl"), before);
}

TEST(Cli, FailedRunIsQuarantined) {
  const auto dir = testing_support::scratch_dir("cli-quarantine");
  write(dir / "r.jsonl",
        R"({"prompt_id":"p","bucket":0,"length":10,"r_task":3,"l_cot":-1,"l_nocot":-1})" "\n"
        R"({"prompt_id":"p","bucket":0,"length":10,"r_task":3,"l_cot":-1})" "\n");
  const auto r = cli(dir, "advantage --rollouts r.jsonl --out adv.jsonl");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("l_nocot"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "adv.jsonl"));
  EXPECT_TRUE(fs::exists(dir / "adv.jsonl.quarantine"));
  EXPECT_FALSE(fs::exists(dir / "adv.jsonl.partial"));
}

TEST(Cli, AnalyzeConfidenceWithMock) {
  const auto& d = dataset();
  write(d / "cot.jsonl", gold_responses(d / "ds" / "val.jsonl", true));
  write(d / "nocot.jsonl", gold_responses(d / "ds" / "val.jsonl", false));
  const auto r = cli(d, "analyze-confidence --input ds/val.jsonl --cot cot.jsonl --nocot nocot.jsonl "
                        "--bonus Therefore=0.5 --out conf.json");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = json::parse(slurp(d / "conf.json"));
  EXPECT_EQ(report["records"].size(), 15u);
  EXPECT_NE(r.out.find("RR\tn=15"), std::string::npos);
}

TEST(Cli, EvalAgainstStubAndTransportFailure) {
  const auto& d = dataset();
  ASSERT_EQ(cli(d, "render --input ds/val.jsonl --mode nocot --out val_prompts.jsonl").code, 0);
  testing_support::StubServer stub(
      [](const json&, int, httplib::Response& res) {
        testing_support::StubServer::reply(res, {{"choices", {{{"text", "<answer>[True]</answer>"}}}}});
      },
      "/v1/completions");
  auto r = cli(d, "eval --prompts val_prompts.jsonl --endpoint " + stub.url() + " --out val_resp.jsonl");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto resp = slurp(d / "val_resp.jsonl");
  EXPECT_EQ(std::count(resp.begin(), resp.end(), '\n'), 15);
  EXPECT_NE(resp.find("\"response\":\"<answer>[True]</answer>\""), std::string::npos);

  r = cli(d, "eval --prompts val_prompts.jsonl --endpoint http://127.0.0.1:1 --retries 1 "
             "--backoff-ms 1 --out dead.jsonl");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("attempts=2"), std::string::npos);
  EXPECT_FALSE(fs::exists(d / "dead.jsonl"));
}
