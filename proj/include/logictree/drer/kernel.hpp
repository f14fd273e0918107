#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace logictree::drer {

struct KernelConfig {
  double lambda_q = 1.0;
  double tau = 8.0;
  double eps = 1e-6;
  // Skip groups whose members all agree on correctness.
  bool dapo_filter = false;
  std::size_t min_bucket_samples = 20;

  // lambda_q >= 0, tau > 0, eps > 0, all finite; ValidationError otherwise.
  void validate() const;
  // The range the attenuation temperature is meant to be tuned in.
  bool tau_in_recommended_range() const { return tau >= 5.0 && tau <= 10.0; }
};

// tanh(l_cot - l_nocot). NumericError on non-finite input.
double reasoning_quality_reward(double l_cot, double l_nocot);

double composite_reward(double r_task, double r_q, double lambda_q);

// (R_i - mean) / (sigma + eps), sigma the population standard deviation.
// Groups with identical rewards give exact zeros. PreconditionError if G < 2.
std::vector<double> group_advantages(std::span<const double> rewards, double eps);

struct BucketBounds {
  int bucket = 0;
  double l_min = 0;
  double l_max = 0;
  std::size_t n = 0;
  std::int64_t step = 0;
  // Attenuation is off (g = 1) for a disabled bucket.
  bool disabled = true;
  // Values copied from an earlier round because this round had too few samples.
  bool carried = false;

  bool operator==(const BucketBounds&) const = default;
};

struct LengthBounds {
  std::map<int, BucketBounds> buckets;

  const BucketBounds* find(int bucket) const;
  bool operator==(const LengthBounds&) const = default;
};

// exp(-max(0, l_min - len, len - l_max) / tau), never below the smallest
// normal double. ValidationError on l_min > l_max, non-finite values or tau <= 0.
double length_attenuation(double length, double l_min, double l_max, double tau);
// g = 1 when the bucket is absent or disabled.
double length_attenuation(double length, const BucketBounds* bounds, double tau);

struct ValidationSample {
  int bucket = 0;
  double length = 0;
  bool correct = false;
  bool format_ok = false;
};

// Nearest-rank percentile of sorted data: element ceil(p * n / 100), 1-based.
double nearest_rank(std::span<const double> sorted, int percent);

// Per bucket: keep correct and well-formed samples, take the 5th and 95th
// nearest-rank percentiles. A bucket below min_samples inherits the previous
// round's enabled bounds (marked carried) or is disabled.
LengthBounds estimate_bounds(std::span<const ValidationSample> samples,
                             std::size_t min_samples, std::int64_t step = 0,
                             const LengthBounds* previous = nullptr);

struct Rollout {
  std::string prompt_id;
  std::optional<int> bucket;
  std::optional<double> length;
  std::optional<double> r_task;
  std::optional<double> l_cot;
  std::optional<double> l_nocot;
  // Falls back to r_task == 3 (a full match) when absent.
  std::optional<bool> correct;
  bool format_ok = true;

  bool is_correct() const;
};

struct AdvantageResult {
  double r_q = 0;
  double r = 0;
  double a_tilde = 0;
  double g = 1;
  double a_hat = 0;
  bool skipped = false;
};

// One group: R_q per member, R = R_task + lambda_q R_q, group normalisation,
// then A_hat = g A_tilde. ValidationError naming the member on a missing or
// non-finite field or a prompt_id mismatch.
std::vector<AdvantageResult> compute_advantages(std::span<const Rollout> group,
                                                const LengthBounds& bounds,
                                                const KernelConfig& config);

// Column-oriented input for host training code. Groups are contiguous;
// group_offsets holds each group's start plus a final end offset.
struct BatchInput {
  std::span<const double> r_task;
  std::span<const double> l_cot;
  std::span<const double> l_nocot;
  std::span<const double> lengths;
  std::span<const int> buckets;
  // Optional; empty means derive from r_task.
  std::span<const std::uint8_t> correct;
  std::span<const std::size_t> group_offsets;
};

struct BatchOutput {
  std::vector<double> r_q;
  std::vector<double> r;
  std::vector<double> a_tilde;
  std::vector<double> g;
  std::vector<double> a_hat;
  std::vector<std::uint8_t> skipped;
};

BatchOutput compute_advantages_batch(const BatchInput& batch,
                                     const LengthBounds& bounds,
                                     const KernelConfig& config);

// Holds the current bounds. Readers take a snapshot and keep using it while a
// new validation round is published.
class BoundsStore {
 public:
  BoundsStore() : current_(std::make_shared<const LengthBounds>()) {}

  std::shared_ptr<const LengthBounds> snapshot() const {
    std::lock_guard lock(mu_);
    return current_;
  }

  void publish(LengthBounds bounds) {
    auto next = std::make_shared<const LengthBounds>(std::move(bounds));
    std::lock_guard lock(mu_);
    current_ = std::move(next);
  }

  // Estimates from this round's samples, carrying forward from the current
  // snapshot, and publishes the result.
  std::shared_ptr<const LengthBounds> update(std::span<const ValidationSample> samples,
                                             std::size_t min_samples, std::int64_t step);

 private:
  mutable std::mutex mu_;
  std::shared_ptr<const LengthBounds> current_;
};

}  // namespace logictree::drer
