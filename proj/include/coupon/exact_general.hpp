#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "coupon/compensated_sum.hpp"
#include "coupon/error.hpp"
#include "coupon/moments.hpp"
#include "coupon/probability_vector.hpp"

namespace coupon {

inline constexpr std::size_t kDefaultMaxSubsetUniverse = 25;
inline constexpr std::size_t kHardMaxSubsetUniverse = 30;

struct EnumerationOptions {
  // Largest n accepted; anything above kDefaultMaxSubsetUniverse produces a
  // warning, anything above kHardMaxSubsetUniverse is rejected.
  std::size_t max_n = kDefaultMaxSubsetUniverse;
  // 0 means std::thread::hardware_concurrency(). Results do not depend on it.
  unsigned workers = 0;
};

// How the 2^n - 1 nonempty subsets are split into shards. Shard s owns the
// contiguous block of Gray-code ranks [s * 2^(n-b), (s+1) * 2^(n-b)) where
// partitions = 2^b, so sharding is by the top bits of the rank.
struct EnumerationPlan {
  std::size_t n = 0;
  std::size_t partitions = 1;
  std::size_t max_n = kDefaultMaxSubsetUniverse;

  std::uint64_t shard_size() const noexcept { return (std::uint64_t{1} << n) / partitions; }
};

// Throws UniverseTooLarge when n > options.max_n and InvalidArgument when
// options.max_n exceeds the hard cap. The shard count depends on n only.
EnumerationPlan make_enumeration_plan(std::size_t n, const EnumerationOptions& options = {});

namespace detail {

// Visits Gray-code ranks [first, last) of the universe p, skipping rank 0
// (the empty set). The subset sum is carried across steps by adding or
// removing one p_j with an error-free update, so each step is O(1) and
// does not drift. visit(bool odd, unsigned cardinality, double sum, mask).
template <typename Visit>
void enumerate_gray_range(const double* p, std::uint64_t first, std::uint64_t last,
                          Visit&& visit) {
  if (first == 0) first = 1;
  if (first >= last) return;

  std::uint64_t mask = first ^ (first >> 1);
  CompensatedSum<> start;
  unsigned cardinality = 0;
  for (std::uint64_t m = mask; m != 0; m &= m - 1) {
    start.add(p[std::countr_zero(m)]);
    ++cardinality;
  }
  double sum = start.raw_sum();
  double comp = start.compensation();
  visit((cardinality & 1u) != 0, cardinality, sum + comp, mask);

  for (std::uint64_t rank = first + 1; rank < last; ++rank) {
    const int bit = std::countr_zero(rank);
    const std::uint64_t flip = std::uint64_t{1} << bit;
    mask ^= flip;
    double delta = p[bit];
    if (mask & flip) {
      ++cardinality;
    } else {
      --cardinality;
      delta = -delta;
    }
    const TwoSum step = two_sum(sum, delta);
    sum = step.sum;
    comp += step.err;
    visit((cardinality & 1u) != 0, cardinality, sum + comp, mask);
  }
}

}  // namespace detail

// Streams every nonempty subset of {0..n-1} exactly once, in reflected
// Gray-code order, as a SubsetTerm. Single-threaded; throws UniverseTooLarge.
template <typename Visit>
void for_each_subset_term(const ProbabilityVector& pv, Visit&& visit,
                          const EnumerationOptions& options = {}) {
  const EnumerationPlan plan = make_enumeration_plan(pv.size(), options);
  const std::uint64_t total = std::uint64_t{1} << plan.n;
  detail::enumerate_gray_range(
      pv.probs().data(), 0, total,
      [&](bool odd, unsigned cardinality, double sum, std::uint64_t mask) {
        visit(SubsetTerm{odd ? 1 : -1, cardinality, sum, mask});
      });
}

// Materialized form of for_each_subset_term; meant for small n.
std::vector<SubsetTerm> subset_terms(const ProbabilityVector& pv,
                                     const EnumerationOptions& options = {});

// The two alternating sums over nonempty subsets J:
//   mean        = sum (-1)^{|J|-1} / q_J
//   half_second = sum (-1)^{|J|-1} / q_J^2
// with positive and negative magnitudes accumulated apart and differenced
// once. Bit-identical for any worker count.
struct InclusionExclusionSums {
  double mean = 0.0;
  double half_second_moment = 0.0;
  std::uint64_t subsets = 0;
  std::vector<std::string> warnings;
};

InclusionExclusionSums inclusion_exclusion_sums(const ProbabilityVector& pv,
                                                const EnumerationOptions& options = {});

double mean_general(const ProbabilityVector& pv, const EnumerationOptions& options = {});

// E(X^2) of the Poissonized collection time: 2 * half_second_moment.
double second_moment_poissonized_general(const ProbabilityVector& pv,
                                         const EnumerationOptions& options = {});

// V(N) = E(X^2) - E(N) - E(N)^2. A negative result no smaller than
// -1e-9 * mean^2 is clamped to zero with a warning; below that StabilityError.
double variance_general(const ProbabilityVector& pv, const EnumerationOptions& options = {});

// Mean, variance and E(X^2) from one enumeration pass.
MomentSummary moments_general(const ProbabilityVector& pv,
                              const EnumerationOptions& options = {});

// --- Poissonized survival-function route -----------------------------------

struct QuadratureSpec {
  double abs_tol = 1e-8;
  // Integration is over [0, t_max]; the remainder is bounded analytically by
  // the union bound P(X > t) <= sum_j exp(-p_j t).
  double t_max = 0.0;
};

// abs_tol as given, t_max = ln(n / abs_tol) / min p, pushed further out until
// the analytic tail bound of both moments is at most abs_tol / 4.
QuadratureSpec make_quadrature_spec(const ProbabilityVector& pv, double abs_tol);

// P(X > t) = 1 - prod_j (1 - exp(-p_j t)), evaluated in log space.
double survival_poissonized(const ProbabilityVector& pv, double t);

// Upper bounds on the truncated tails int_T^inf S(t) dt and
// int_T^inf 2t S(t) dt.
double mean_tail_bound(const ProbabilityVector& pv, double t_max);
double second_moment_tail_bound(const ProbabilityVector& pv, double t_max);

// E(X) = int_0^inf S(t) dt, which equals E(N). Error at most spec.abs_tol;
// throws ToleranceNotReached otherwise.
double mean_via_integration(const ProbabilityVector& pv, const QuadratureSpec& spec);
double mean_via_integration(const ProbabilityVector& pv, double abs_tol = 1e-8);

// E(X^2) = int_0^inf 2t S(t) dt.
double second_moment_via_integration(const ProbabilityVector& pv, const QuadratureSpec& spec);
double second_moment_via_integration(const ProbabilityVector& pv, double abs_tol = 1e-8);

}  // namespace coupon
