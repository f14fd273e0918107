#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace logictree::scorer {

struct TokenLogprob {
  std::string token;
  // Natural log, <= 0.
  double logprob = 0;
};

struct ScorerCapabilities {
  std::string name;
  std::string tokenizer;
  bool deterministic = false;
  // Safe number of concurrent score_continuation calls.
  std::size_t max_in_flight = 1;
};

// Scores `continuation` given `context`. The scorer owns tokenisation; the
// returned tokens concatenate to exactly `continuation`.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual ScorerCapabilities capabilities() const = 0;
  virtual std::vector<TokenLogprob> score_continuation(std::string_view context,
                                                       std::string_view continuation) = 0;
};

// ContractViolation when a log-prob is non-finite or positive, or the tokens
// do not rebuild the continuation.
void validate_scores(const std::vector<TokenLogprob>& tokens, std::string_view continuation,
                     int attempts = 1);

// Arithmetic mean of the token log-probs. PreconditionError when empty.
double mean_logprob(const std::vector<TokenLogprob>& tokens);

// Smoothed byte-trigram model fitted on the context plus the already-scored
// part of the continuation:
//   p(c | a b) = (n(abc) + alpha) / (n(ab) + 256 alpha).
// If the context contains a marker from the bonus table, every log-prob is
// scaled by 1 - min(0.95, sum of matching bonuses), pulling it toward zero.
class MockTrigramScorer final : public Scorer {
 public:
  explicit MockTrigramScorer(double alpha = 1.0, std::map<std::string, double> bonus = {});

  ScorerCapabilities capabilities() const override;
  std::vector<TokenLogprob> score_continuation(std::string_view context,
                                               std::string_view continuation) override;

  double alpha() const { return alpha_; }
  const std::map<std::string, double>& bonus() const { return bonus_; }

 private:
  double alpha_;
  std::map<std::string, double> bonus_;
};

}  // namespace logictree::scorer
