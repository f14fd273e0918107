#include "logictree/scorer/http_client.hpp"

#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "logictree/error.hpp"

namespace logictree::scorer {

using nlohmann::json;
using Kind = TransportError::Kind;

namespace {

void check_config(const HttpEndpointConfig& c) {
  if (c.max_retries < 0) throw PreconditionError("max_retries must be >= 0");
  if (c.timeout.count() <= 0) throw PreconditionError("timeout must be positive");
  if (c.backoff_factor < 1.0) throw PreconditionError("backoff_factor must be >= 1");
}

void default_sleep(std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }

bool retryable(const TransportError& e) {
  switch (e.kind()) {
    case Kind::kConnection:
    case Kind::kTimeout:
      return true;
    case Kind::kStatus:
      return e.status() == 429 || e.status() >= 500;
    default:
      return false;
  }
}

json post_json(const HttpEndpointConfig& config, const json& request, int attempt_no) {
  httplib::Client cli(config.base_url);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config.timeout - secs);
  cli.set_connection_timeout(secs.count(), usecs.count());
  cli.set_read_timeout(secs.count(), usecs.count());
  cli.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  for (const auto& [k, v] : config.headers) headers.emplace(k, v);

  auto res = cli.Post(config.path, headers, request.dump(), "application/json");
  if (!res) {
    const auto err = res.error();
    const Kind kind = err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read
                          ? Kind::kTimeout
                          : Kind::kConnection;
    throw TransportError(kind, "request to " + config.base_url + config.path +
                                   " failed: " + httplib::to_string(err),
                         0, attempt_no);
  }
  if (res->status < 200 || res->status >= 300) {
    throw TransportError(Kind::kStatus, "endpoint returned HTTP " + std::to_string(res->status),
                         res->status, attempt_no);
  }
  try {
    return json::parse(res->body);
  } catch (const json::exception& e) {
    throw TransportError(Kind::kMalformed, std::string("response is not JSON: ") + e.what(),
                         res->status, attempt_no);
  }
}

// Runs fn(attempt_no) until it succeeds, a non-retryable error comes up or
// the retry budget is spent. Errors leave with the final attempt count.
template <typename F>
auto with_retries(const HttpEndpointConfig& config,
                  const std::function<void(std::chrono::milliseconds)>& sleep, F fn) {
  auto backoff = config.initial_backoff;
  for (int n = 1;; ++n) {
    try {
      return fn(n);
    } catch (const ContractViolation& e) {
      throw ContractViolation(e.what(), n);
    } catch (const TransportError& e) {
      if (!retryable(e) || n > config.max_retries) {
        throw TransportError(e.kind(),
                             std::string(e.what()) + " (after " + std::to_string(n) + " attempt(s))",
                             e.status(), n);
      }
    } catch (const json::exception& e) {
      throw TransportError(Kind::kMalformed, std::string("unexpected response shape: ") + e.what(),
                           0, n);
    }
    sleep(backoff);
    backoff = std::chrono::milliseconds(
        static_cast<long long>(static_cast<double>(backoff.count()) * config.backoff_factor));
  }
}

std::vector<TokenLogprob> decode_score(const json& body) {
  const auto& tokens = body.at("tokens");
  const auto& lps = body.at("logprobs");
  if (!tokens.is_array() || !lps.is_array() || tokens.size() != lps.size()) {
    throw TransportError(Kind::kMalformed, "tokens and logprobs must be arrays of equal length");
  }
  std::vector<TokenLogprob> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!lps[i].is_number()) {
      throw TransportError(Kind::kMalformed, "logprob " + std::to_string(i) + " is not a number");
    }
    out.push_back({tokens[i].get<std::string>(), lps[i].get<double>()});
  }
  return out;
}

std::vector<TokenLogprob> decode_echo(const json& body, std::size_t context_bytes) {
  const auto& lp = body.at("choices").at(0).at("logprobs");
  const auto& tokens = lp.at("tokens");
  const auto& values = lp.at("token_logprobs");
  const auto& offsets = lp.at("text_offset");
  if (tokens.size() != values.size() || tokens.size() != offsets.size()) {
    throw TransportError(Kind::kMalformed, "echo logprob arrays differ in length");
  }
  std::vector<TokenLogprob> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto off = offsets[i].get<std::size_t>();
    const auto tok = tokens[i].get<std::string>();
    if (off + tok.size() <= context_bytes) continue;
    if (off < context_bytes) {
      throw ContractViolation("a token straddles the context/continuation boundary");
    }
    if (!values[i].is_number()) {
      throw TransportError(Kind::kMalformed, "missing log-prob for continuation token");
    }
    out.push_back({tok, values[i].get<double>()});
  }
  return out;
}

}  // namespace

HttpScoreClient::HttpScoreClient(HttpScorerConfig config)
    : config_(std::move(config)), sleep_(default_sleep) {
  check_config(config_);
}

ScorerCapabilities HttpScoreClient::capabilities() const {
  return {config_.protocol == HttpProtocol::kScore ? "http-score" : "http-completions-echo",
          "remote", false, std::max<std::size_t>(1, config_.max_in_flight)};
}

ScoreCall HttpScoreClient::score(std::string_view context, std::string_view continuation) {
  json req;
  if (config_.protocol == HttpProtocol::kScore) {
    req = {{"context", context}, {"continuation", continuation}};
  } else {
    req = {{"prompt", std::string(context) + std::string(continuation)},
           {"max_tokens", 0},
           {"echo", true},
           {"logprobs", 1}};
    if (!config_.model.empty()) req["model"] = config_.model;
  }
  return with_retries(config_, sleep_, [&](int n) {
    const json body = post_json(config_, req, n);
    ScoreCall call;
    call.tokens = config_.protocol == HttpProtocol::kScore ? decode_score(body)
                                                           : decode_echo(body, context.size());
    call.attempts = n;
    validate_scores(call.tokens, continuation, n);
    return call;
  });
}

std::vector<TokenLogprob> HttpScoreClient::score_continuation(std::string_view context,
                                                              std::string_view continuation) {
  return score(context, continuation).tokens;
}

HttpTextGenerator::HttpTextGenerator(HttpEndpointConfig config, int max_tokens,
                                     double temperature)
    : config_(std::move(config)),
      max_tokens_(max_tokens),
      temperature_(temperature),
      sleep_(default_sleep) {
  check_config(config_);
  if (max_tokens_ < 1) throw PreconditionError("max_tokens must be >= 1");
}

GenerationCall HttpTextGenerator::generate(std::string_view prompt) {
  json req = {{"prompt", prompt}, {"max_tokens", max_tokens_}, {"temperature", temperature_}};
  if (!config_.model.empty()) req["model"] = config_.model;
  return with_retries(config_, sleep_, [&](int n) {
    const json body = post_json(config_, req, n);
    return GenerationCall{body.at("choices").at(0).at("text").get<std::string>(), n};
  });
}

}  // namespace logictree::scorer
