#pragma once

#include <cstddef>

#include "coupon/moments.hpp"

namespace coupon {

// Generalized harmonic number H_n^(r) = sum_{m=1..n} 1/m^r, summed from the
// smallest term up with compensation. Throws InvalidArgument for n or r == 0.
double harmonic_number(std::size_t n, unsigned r = 1);

// E(N) = n * H_n for n equally likely coupon types.
double mean_equal(std::size_t n);

// V(N) = n^2 * H_n^(2) - n * H_n, from the sum of independent geometric
// stage variances.
double variance_equal(std::size_t n);

// E(X^2) = 2 n^2 * sum_{1<=k<=j<=n} 1/(jk) for the Poissonized collection
// time X. O(n) via running partial harmonic sums.
double second_moment_poissonized_equal(std::size_t n);

// V(N) = 2n^2 sum_{k<=j} 1/(jk) - n H_n - (n H_n)^2, obtained by squaring the
// first-step recurrence T_m = 1 + I*T_m' + (1 - I)*T_{m+1}. Shares no code
// with variance_equal.
double variance_equal_via_recurrence(std::size_t n);

// Closed-form summary (mean, variance, Poissonized second moment).
MomentSummary moments_equal(std::size_t n);

}  // namespace coupon
