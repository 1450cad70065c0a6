#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace coupon {

inline constexpr double kNormalizationTolerance = 1e-9;
inline constexpr double kMinimumEntry = 1e-12;

// Validated coupon probabilities p_1..p_n: every entry strictly positive and
// at least kMinimumEntry, summing to one within kNormalizationTolerance.
// Immutable once built.
class ProbabilityVector {
 public:
  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const noexcept { return probs_[i]; }
  double min() const noexcept { return min_; }

  friend ProbabilityVector make_probability_vector(std::span<const double> values,
                                                   bool renormalize);
  friend ProbabilityVector uniform_probability_vector(std::size_t n);

 private:
  explicit ProbabilityVector(std::vector<double> probs);

  std::vector<double> probs_;
  double min_;
};

// Throws EmptyInput, NonPositiveEntry (with index), EntryTooSmall (with
// index) or SumOutOfTolerance. With renormalize set each entry is divided by
// the total before validation.
ProbabilityVector make_probability_vector(std::span<const double> values,
                                          bool renormalize = false);

// n entries of exactly 1/n. Throws InvalidCount for n == 0.
ProbabilityVector uniform_probability_vector(std::size_t n);

// True iff max_i |p_i - 1/n| <= eps.
bool is_uniform(const ProbabilityVector& pv, double eps);

}  // namespace coupon
