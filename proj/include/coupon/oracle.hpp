#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "coupon/probability_vector.hpp"

namespace coupon {

inline constexpr std::size_t kMaxOracleUniverse = 20;

struct OracleResult {
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
  std::uint64_t states_solved = 0;
};

// Exact E(N) and E(N^2) from the absorbing chain on collected sets. For a
// state S with q = sum_{j in S} p_j, one draw either repeats (prob q) or adds
// some j not in S, giving
//   (1 - q) E[T_S]   = 1 + sum_{j not in S} p_j E[T_{S+j}]
//   (1 - q) E[T_S^2] = 2 E[T_S] - 1 + sum_{j not in S} p_j E[T_{S+j}^2]
// States are solved from the full set down, one cardinality level at a time.
// UniverseTooLarge when n > 20.
OracleResult exact_moments_bruteforce(const ProbabilityVector& pv);

namespace detail {

// Same sweep, visiting the states of each cardinality level in the order
// given by `level_order` (all masks, grouped by descending popcount).
OracleResult solve_subset_chain(const ProbabilityVector& pv,
                                std::span<const std::uint32_t> level_order);

// Masks of {0..n-1} except the full set, by descending popcount, ascending
// numerically within a level.
std::vector<std::uint32_t> default_level_order(std::size_t n);

}  // namespace detail

}  // namespace coupon
