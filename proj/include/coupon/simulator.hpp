#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "coupon/alias_table.hpp"
#include "coupon/probability_vector.hpp"
#include "coupon/rng.hpp"

namespace coupon {

using Histogram = std::map<std::uint64_t, std::uint64_t>;

struct SimulationReport {
  std::size_t n = 0;
  std::uint64_t trials = 0;
  double sample_mean = 0.0;
  double sample_variance = 0.0;  // divisor trials - 1; zero below two trials
  double std_error_of_mean = 0.0;
  // Large-sample standard error of sample_variance, from the fourth moment.
  double std_error_of_variance = 0.0;
  std::uint64_t min_draws = 0;
  std::uint64_t max_draws = 0;
  std::optional<Histogram> histogram;

  // Sums of 2nd, 3rd and 4th powers of deviations from sample_mean; these
  // make merging exact up to rounding.
  double central_m2 = 0.0;
  double central_m3 = 0.0;
  double central_m4 = 0.0;
};

// Draws until every one of the n types has been seen, via an alias table.
class CollectionSampler {
 public:
  explicit CollectionSampler(const ProbabilityVector& pv);

  std::size_t size() const noexcept { return table_.size(); }
  std::uint64_t operator()(Xoshiro256pp& rng) const;

 private:
  AliasTable table_;
};

// Uniform case as a sum of geometric stages: with m types held, the wait for
// a new one is Geometric((n - m) / n), drawn by inversion.
class EqualStageSampler {
 public:
  explicit EqualStageSampler(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  std::uint64_t operator()(Xoshiro256pp& rng) const;

 private:
  std::size_t n_;
  std::vector<double> inv_log_repeat_;  // 1 / ln(m / n) for m = 1..n-1
};

std::uint64_t sample_collection_length(const ProbabilityVector& pv, Xoshiro256pp& rng);
std::uint64_t sample_equal_fast(std::size_t n, Xoshiro256pp& rng);

struct TrialConfig {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 42;
  unsigned workers = 1;  // 0 means hardware concurrency
  bool want_histogram = false;
  // Index of the first trial; lets a run be split into pieces that merge to
  // the same sample as the whole.
  std::uint64_t first_trial = 0;
};

// A probability vector (alias-table sampler) or a bare count n (geometric
// stage sampler for the uniform case).
using SimulationTarget = std::variant<ProbabilityVector, std::size_t>;

// Trial t draws from Xoshiro256pp::for_trial(seed, t). Trials are grouped in
// fixed blocks merged in block order, so the report is identical for any
// worker count. InvalidArgument if trials < 2.
SimulationReport run_trials(const SimulationTarget& target, const TrialConfig& config);

// Exact pooled moments of the union of two samples from the same target.
// IncompatibleReports if both are nonempty and differ in n or in whether a
// histogram is kept.
SimulationReport merge_reports(const SimulationReport& a, const SimulationReport& b);

// Report for an explicit list of draw counts.
SimulationReport report_from_draws(std::size_t n, std::span<const std::uint64_t> draws,
                                   bool want_histogram);

}  // namespace coupon
