#include "logictree/drer/kernel.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

#include "logictree/error.hpp"

namespace logictree::drer {

namespace {

constexpr double kFullMatchReward = 3.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

void KernelConfig::validate() const {
  if (!std::isfinite(lambda_q) || lambda_q < 0.0) {
    throw ValidationError("lambda_q must be finite and >= 0, got " + num(lambda_q));
  }
  if (!std::isfinite(tau) || tau <= 0.0) {
    throw ValidationError("tau must be finite and > 0, got " + num(tau));
  }
  if (!std::isfinite(eps) || eps <= 0.0) {
    throw ValidationError("eps must be finite and > 0, got " + num(eps));
  }
}

double reasoning_quality_reward(double l_cot, double l_nocot) {
  if (!std::isfinite(l_cot) || !std::isfinite(l_nocot)) {
    throw NumericError("log-probabilities must be finite (l_cot=" + num(l_cot) +
                       ", l_nocot=" + num(l_nocot) + ")");
  }
  return std::tanh(l_cot - l_nocot);
}

double composite_reward(double r_task, double r_q, double lambda_q) {
  return r_task + lambda_q * r_q;
}

std::vector<double> group_advantages(std::span<const double> rewards, double eps) {
  if (rewards.size() < 2) {
    throw PreconditionError("group normalisation needs at least 2 members, got " +
                            std::to_string(rewards.size()));
  }
  for (double r : rewards) {
    if (!std::isfinite(r)) throw NumericError("non-finite reward in group");
  }
  std::vector<double> out(rewards.size(), 0.0);
  if (std::all_of(rewards.begin(), rewards.end(),
                  [&](double r) { return r == rewards.front(); })) {
    return out;
  }
  const double n = static_cast<double>(rewards.size());
  const double mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) / n;
  double ss = 0.0;
  for (double r : rewards) ss += (r - mean) * (r - mean);
  const double sigma = std::sqrt(ss / n);
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    out[i] = (rewards[i] - mean) / (sigma + eps);
  }
  return out;
}

const BucketBounds* LengthBounds::find(int bucket) const {
  auto it = buckets.find(bucket);
  return it == buckets.end() ? nullptr : &it->second;
}

double length_attenuation(double length, double l_min, double l_max, double tau) {
  if (!std::isfinite(length) || !std::isfinite(l_min) || !std::isfinite(l_max)) {
    throw ValidationError("attenuation inputs must be finite");
  }
  if (l_min > l_max) {
    throw ValidationError("invalid bounds: l_min " + num(l_min) + " > l_max " + num(l_max));
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("tau must be > 0");
  const double excess = std::max({0.0, l_min - length, length - l_max});
  if (excess == 0.0) return 1.0;
  return std::max(std::exp(-excess / tau), DBL_MIN);
}

double length_attenuation(double length, const BucketBounds* bounds, double tau) {
  if (bounds == nullptr || bounds->disabled) return 1.0;
  return length_attenuation(length, bounds->l_min, bounds->l_max, tau);
}

double nearest_rank(std::span<const double> sorted, int percent) {
  if (sorted.empty()) throw PreconditionError("percentile of an empty sample");
  if (percent < 0 || percent > 100) throw PreconditionError("percent outside [0, 100]");
  const std::size_t n = sorted.size();
  std::size_t rank = (static_cast<std::size_t>(percent) * n + 99) / 100;
  rank = std::clamp<std::size_t>(rank, 1, n);
  return sorted[rank - 1];
}

LengthBounds estimate_bounds(std::span<const ValidationSample> samples,
                             std::size_t min_samples, std::int64_t step,
                             const LengthBounds* previous) {
  std::map<int, std::vector<double>> lengths;
  for (const auto& s : samples) {
    auto& v = lengths[s.bucket];
    if (s.correct && s.format_ok && std::isfinite(s.length)) v.push_back(s.length);
  }
  if (previous) {
    for (const auto& [b, _] : previous->buckets) lengths[b];
  }

  LengthBounds out;
  for (auto& [bucket, v] : lengths) {
    std::sort(v.begin(), v.end());
    BucketBounds bb;
    bb.bucket = bucket;
    bb.n = v.size();
    bb.step = step;
    if (!v.empty() && v.size() >= std::max<std::size_t>(min_samples, 1)) {
      bb.l_min = nearest_rank(v, 5);
      bb.l_max = nearest_rank(v, 95);
      bb.disabled = false;
    } else if (const BucketBounds* prev = previous ? previous->find(bucket) : nullptr;
               prev && !prev->disabled) {
      bb = *prev;
      bb.carried = true;
    }
    out.buckets.emplace(bucket, bb);
  }
  return out;
}

std::shared_ptr<const LengthBounds> BoundsStore::update(
    std::span<const ValidationSample> samples, std::size_t min_samples, std::int64_t step) {
  const auto prev = snapshot();
  publish(estimate_bounds(samples, min_samples, step, prev.get()));
  return snapshot();
}

bool Rollout::is_correct() const {
  if (correct) return *correct;
  return r_task && *r_task == kFullMatchReward;
}

namespace {

double require(const std::optional<double>& v, const char* field, std::size_t member,
               const std::string& prompt_id) {
  if (!v) {
    throw ValidationError("member " + std::to_string(member) + " of prompt '" +
                          prompt_id + "' is missing " + field);
  }
  if (!std::isfinite(*v)) {
    throw ValidationError("member " + std::to_string(member) + " of prompt '" +
                          prompt_id + "' has non-finite " + field);
  }
  return *v;
}

}  // namespace

std::vector<AdvantageResult> compute_advantages(std::span<const Rollout> group,
                                                const LengthBounds& bounds,
                                                const KernelConfig& config) {
  config.validate();
  if (group.size() < 2) {
    throw ValidationError("group '" + (group.empty() ? std::string() : group[0].prompt_id) +
                          "' has " + std::to_string(group.size()) +
                          " member(s); at least 2 are required");
  }
  std::vector<AdvantageResult> out(group.size());
  std::vector<double> rewards(group.size());
  for (std::size_t i = 0; i < group.size(); ++i) {
    const Rollout& m = group[i];
    if (m.prompt_id != group[0].prompt_id) {
      throw ValidationError("member " + std::to_string(i) + " has prompt_id '" +
                            m.prompt_id + "', group is '" + group[0].prompt_id + "'");
    }
    if (!m.bucket) {
      throw ValidationError("member " + std::to_string(i) + " of prompt '" +
                            m.prompt_id + "' is missing bucket");
    }
    const double len = require(m.length, "length", i, m.prompt_id);
    if (len < 0) {
      throw ValidationError("member " + std::to_string(i) + " has negative length");
    }
    const double r_task = require(m.r_task, "r_task", i, m.prompt_id);
    const double l_cot = require(m.l_cot, "l_cot", i, m.prompt_id);
    const double l_nocot = require(m.l_nocot, "l_nocot", i, m.prompt_id);
    out[i].r_q = reasoning_quality_reward(l_cot, l_nocot);
    out[i].r = composite_reward(r_task, out[i].r_q, config.lambda_q);
    out[i].g = length_attenuation(len, bounds.find(*m.bucket), config.tau);
    rewards[i] = out[i].r;
  }

  if (config.dapo_filter) {
    const bool first = group[0].is_correct();
    const bool uniform = std::all_of(group.begin(), group.end(),
                                     [&](const Rollout& m) { return m.is_correct() == first; });
    if (uniform) {
      for (auto& r : out) {
        r.skipped = true;
        r.a_tilde = 0.0;
        r.a_hat = 0.0;
      }
      return out;
    }
  }

  const auto adv = group_advantages(rewards, config.eps);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].a_tilde = adv[i];
    out[i].a_hat = out[i].g * adv[i];
  }
  return out;
}

BatchOutput compute_advantages_batch(const BatchInput& b, const LengthBounds& bounds,
                                     const KernelConfig& config) {
  const std::size_t n = b.r_task.size();
  const auto check = [&](std::size_t size, const char* name) {
    if (size != n) {
      throw ValidationError(std::string(name) + " has " + std::to_string(size) +
                            " entries, r_task has " + std::to_string(n));
    }
  };
  check(b.l_cot.size(), "l_cot");
  check(b.l_nocot.size(), "l_nocot");
  check(b.lengths.size(), "lengths");
  check(b.buckets.size(), "buckets");
  if (!b.correct.empty()) check(b.correct.size(), "correct");
  if (b.group_offsets.size() < 2 || b.group_offsets.front() != 0 ||
      b.group_offsets.back() != n) {
    throw ValidationError("group_offsets must start at 0 and end at the batch size");
  }

  BatchOutput out;
  for (auto* v : {&out.r_q, &out.r, &out.a_tilde, &out.g, &out.a_hat}) v->resize(n);
  out.skipped.resize(n);
  std::vector<Rollout> group;
  for (std::size_t k = 0; k + 1 < b.group_offsets.size(); ++k) {
    const std::size_t begin = b.group_offsets[k];
    const std::size_t end = b.group_offsets[k + 1];
    if (end < begin) throw ValidationError("group_offsets must be non-decreasing");
    group.clear();
    for (std::size_t i = begin; i < end; ++i) {
      Rollout r;
      r.prompt_id = std::to_string(k);
      r.bucket = b.buckets[i];
      r.length = b.lengths[i];
      r.r_task = b.r_task[i];
      r.l_cot = b.l_cot[i];
      r.l_nocot = b.l_nocot[i];
      if (!b.correct.empty()) r.correct = b.correct[i] != 0;
      group.push_back(std::move(r));
    }
    const auto res = compute_advantages(group, bounds, config);
    for (std::size_t i = begin; i < end; ++i) {
      const auto& a = res[i - begin];
      out.r_q[i] = a.r_q;
      out.r[i] = a.r;
      out.a_tilde[i] = a.a_tilde;
      out.g[i] = a.g;
      out.a_hat[i] = a.a_hat;
      out.skipped[i] = a.skipped ? 1 : 0;
    }
  }
  return out;
}

}  // namespace logictree::drer
