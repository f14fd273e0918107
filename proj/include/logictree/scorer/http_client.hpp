#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <string>

#include "logictree/scorer/scorer.hpp"

namespace logictree::scorer {

enum class HttpProtocol : std::uint8_t {
  // POST {context, continuation} -> {tokens, logprobs}.
  kScore,
  // OpenAI-style completions with echo=true, max_tokens=0, logprobs; the
  // continuation tokens are picked out by text offset.
  kCompletionsEcho,
};

struct HttpEndpointConfig {
  // scheme://host:port
  std::string base_url = "http://127.0.0.1:8000";
  std::string path = "/v1/score";
  HttpProtocol protocol = HttpProtocol::kScore;
  // Sent as "model" in completions requests.
  std::string model;
  std::map<std::string, std::string> headers;
  // Retries after the first attempt.
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{200};
  double backoff_factor = 2.0;
  std::chrono::milliseconds timeout{30000};
  std::size_t max_in_flight = 4;
};

using HttpScorerConfig = HttpEndpointConfig;

struct ScoreCall {
  std::vector<TokenLogprob> tokens;
  int attempts = 0;
};

// Retries connection failures, timeouts, 429 and 5xx with exponential
// backoff. Other statuses, malformed bodies and contract violations fail at
// once. Every TransportError carries the attempt count.
class HttpScoreClient final : public Scorer {
 public:
  explicit HttpScoreClient(HttpScorerConfig config);

  ScorerCapabilities capabilities() const override;
  std::vector<TokenLogprob> score_continuation(std::string_view context,
                                               std::string_view continuation) override;
  ScoreCall score(std::string_view context, std::string_view continuation);

  const HttpScorerConfig& config() const { return config_; }
  // Replaces the sleep between attempts; tests use it to avoid waiting.
  void set_sleeper(std::function<void(std::chrono::milliseconds)> sleeper) {
    sleep_ = std::move(sleeper);
  }

 private:
  HttpScorerConfig config_;
  std::function<void(std::chrono::milliseconds)> sleep_;
};

struct GenerationCall {
  std::string text;
  int attempts = 0;
};

// Completions endpoint driver for the eval command: POST {model, prompt,
// max_tokens, temperature} and read choices[0].text. Same retry policy as the
// scoring client.
class HttpTextGenerator {
 public:
  HttpTextGenerator(HttpEndpointConfig config, int max_tokens, double temperature);

  GenerationCall generate(std::string_view prompt);

  void set_sleeper(std::function<void(std::chrono::milliseconds)> sleeper) {
    sleep_ = std::move(sleeper);
  }

 private:
  HttpEndpointConfig config_;
  int max_tokens_;
  double temperature_;
  std::function<void(std::chrono::milliseconds)> sleep_;
};

}  // namespace logictree::scorer
