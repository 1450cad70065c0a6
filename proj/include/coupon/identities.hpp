#pragma once

#include <cstddef>
#include <string>

namespace coupon {

inline constexpr std::size_t kMaxBinomialSumN = 60;
inline constexpr unsigned kMaxIdentityOrder = 3;

struct IdentityReport {
  std::string name;
  std::size_t n = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_diff = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

// sum_{k=1..n} (-1)^{k-1} C(n,k) / k^r. The terms reach ~1e10 at n = 40 while
// the sum stays O(log n), so binomials are exact integers and the terms are
// accumulated in extended precision. OutOfRange unless 1 <= n <= 60 and
// 1 <= r <= 3.
double binomial_alternating_sum(std::size_t n, unsigned r);

// sum over 1 <= i_1 <= ... <= i_r <= n of 1/(i_1 ... i_r), via
// S_r(n) = sum_{k=1..n} S_{r-1}(k) / k with S_0 = 1. The ordering is
// non-strict; the strict reading does not match the alternating sum.
// OutOfRange unless n >= 1 and 1 <= r <= 3.
double nested_harmonic_sum(std::size_t n, unsigned r);

// 2 sum_{1<=j<=k<=n} 1/(jk) against H_n^(2) + H_n^2, compared in absolute
// terms.
IdentityReport check_harmonic_square_identity(std::size_t n, double tol = 1e-9);

// binomial_alternating_sum(n, r) against nested_harmonic_sum(n, r), compared
// relative to |rhs|.
IdentityReport check_binomial_sum_identity(std::size_t n, unsigned r, double rel_tol = 1e-8);

}  // namespace coupon
