#include "coupon/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <vector>

#include "coupon/compensated_sum.hpp"
#include "coupon/error.hpp"

namespace coupon {

namespace detail {

std::vector<std::uint32_t> default_level_order(std::size_t n) {
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  std::vector<std::uint32_t> order;
  order.reserve(full);
  std::vector<std::vector<std::uint32_t>> levels(n);
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    levels[std::popcount(mask)].push_back(mask);
  }
  for (std::size_t level = n; level-- > 0;) {
    order.insert(order.end(), levels[level].begin(), levels[level].end());
  }
  return order;
}

OracleResult solve_subset_chain(const ProbabilityVector& pv,
                                std::span<const std::uint32_t> level_order) {
  const std::size_t n = pv.size();
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  std::vector<double> first(std::size_t{full} + 1, 0.0);
  std::vector<double> second(std::size_t{full} + 1, 0.0);

  for (std::uint32_t state : level_order) {
    // 1 - q(S) is summed over the missing types directly; it stays accurate
    // when q(S) is close to one.
    CompensatedSum<> escape, next_first, next_second;
    for (std::uint32_t missing = full & ~state; missing != 0; missing &= missing - 1) {
      const int j = std::countr_zero(missing);
      const std::uint32_t to = state | (std::uint32_t{1} << j);
      escape.add(pv[j]);
      next_first.add(pv[j] * first[to]);
      next_second.add(pv[j] * second[to]);
    }
    const double out = escape.value();
    const double mean = (1.0 + next_first.value()) / out;
    first[state] = mean;
    second[state] = (2.0 * mean - 1.0 + next_second.value()) / out;
  }

  OracleResult r;
  r.mean = first[0];
  r.second_moment = second[0];
  const double sq_hi = r.mean * r.mean;
  CompensatedSum<> v(r.second_moment);
  v.add(-sq_hi);
  v.add(-std::fma(r.mean, r.mean, -sq_hi));
  r.variance = std::max(0.0, v.value());
  r.states_solved = std::uint64_t{full} + 1;
  return r;
}

}  // namespace detail

OracleResult exact_moments_bruteforce(const ProbabilityVector& pv) {
  if (pv.size() > kMaxOracleUniverse) {
    std::ostringstream msg;
    msg << "oracle supports n <= " << kMaxOracleUniverse << ", got " << pv.size();
    throw Error(ErrorCode::UniverseTooLarge, msg.str());
  }
  const auto order = detail::default_level_order(pv.size());
  return detail::solve_subset_chain(pv, order);
}

}  // namespace coupon
