#include "logictree/scorer/scorer.hpp"

#include <cmath>
#include <numeric>
#include <unordered_map>

#include "logictree/error.hpp"

namespace logictree::scorer {

void validate_scores(const std::vector<TokenLogprob>& tokens, std::string_view continuation,
                     int attempts) {
  std::string rebuilt;
  rebuilt.reserve(continuation.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const double lp = tokens[i].logprob;
    if (!std::isfinite(lp)) {
      throw ContractViolation("token " + std::to_string(i) + " has a non-finite log-prob",
                              attempts);
    }
    if (lp > 0.0) {
      throw ContractViolation("token " + std::to_string(i) + " has positive log-prob " +
                                  std::to_string(lp),
                              attempts);
    }
    rebuilt += tokens[i].token;
  }
  if (rebuilt != continuation) {
    throw ContractViolation("tokens do not rebuild the continuation", attempts);
  }
  if (tokens.empty() && !continuation.empty()) {
    throw ContractViolation("no tokens for a non-empty continuation", attempts);
  }
}

double mean_logprob(const std::vector<TokenLogprob>& tokens) {
  if (tokens.empty()) throw PreconditionError("mean of an empty token span");
  double sum = 0.0;
  for (const auto& t : tokens) sum += t.logprob;
  return sum / static_cast<double>(tokens.size());
}

MockTrigramScorer::MockTrigramScorer(double alpha, std::map<std::string, double> bonus)
    : alpha_(alpha), bonus_(std::move(bonus)) {
  if (!(alpha_ > 0.0)) throw PreconditionError("mock scorer alpha must be > 0");
  for (const auto& [marker, b] : bonus_) {
    if (marker.empty() || !(b >= 0.0)) {
      throw PreconditionError("bonus markers must be non-empty with bonus >= 0");
    }
  }
}

ScorerCapabilities MockTrigramScorer::capabilities() const {
  return {"mock-trigram", "bytes", true, 64};
}

std::vector<TokenLogprob> MockTrigramScorer::score_continuation(std::string_view context,
                                                                std::string_view continuation) {
  const auto key2 = [](unsigned char a, unsigned char b) {
    return static_cast<std::uint32_t>(a) << 8 | b;
  };
  const auto key3 = [](unsigned char a, unsigned char b, unsigned char c) {
    return static_cast<std::uint32_t>(a) << 16 | static_cast<std::uint32_t>(b) << 8 | c;
  };
  std::unordered_map<std::uint32_t, std::uint32_t> bigrams;
  std::unordered_map<std::uint32_t, std::uint32_t> trigrams;

  std::string history(context);
  for (std::size_t i = 2; i < history.size(); ++i) {
    const auto a = static_cast<unsigned char>(history[i - 2]);
    const auto b = static_cast<unsigned char>(history[i - 1]);
    const auto c = static_cast<unsigned char>(history[i]);
    ++bigrams[key2(a, b)];
    ++trigrams[key3(a, b, c)];
  }

  double boost = 0.0;
  for (const auto& [marker, b] : bonus_) {
    if (context.find(marker) != std::string_view::npos) boost += b;
  }
  const double scale = 1.0 - std::min(0.95, boost);

  std::vector<TokenLogprob> out;
  out.reserve(continuation.size());
  for (char ch : continuation) {
    const std::size_t n = history.size();
    const auto a = static_cast<unsigned char>(n >= 2 ? history[n - 2] : '\0');
    const auto b = static_cast<unsigned char>(n >= 1 ? history[n - 1] : '\0');
    const auto c = static_cast<unsigned char>(ch);
    const auto ab = bigrams.find(key2(a, b));
    const auto abc = trigrams.find(key3(a, b, c));
    const double n_ab = ab == bigrams.end() ? 0.0 : ab->second;
    const double n_abc = abc == trigrams.end() ? 0.0 : abc->second;
    const double p = (n_abc + alpha_) / (n_ab + 256.0 * alpha_);
    out.push_back({std::string(1, ch), std::log(p) * scale});
    if (n >= 2) {
      ++bigrams[key2(a, b)];
      ++trigrams[key3(a, b, c)];
    }
    history += ch;
  }
  return out;
}

}  // namespace logictree::scorer
