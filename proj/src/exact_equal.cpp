#include "coupon/exact_equal.hpp"

#include "coupon/compensated_sum.hpp"
#include "coupon/error.hpp"

namespace coupon {

namespace {

void require_count(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidCount, "coupon count must be at least 1");
}

double inverse_power(double m, unsigned r) {
  double d = m;
  for (unsigned i = 1; i < r; ++i) d *= m;
  return 1.0 / d;
}

}  // namespace

double harmonic_number(std::size_t n, unsigned r) {
  if (n == 0 || r == 0) {
    throw Error(ErrorCode::InvalidArgument, "harmonic_number needs n >= 1 and r >= 1");
  }
  CompensatedSum<> sum;
  for (std::size_t m = n; m >= 1; --m) {
    sum.add(inverse_power(static_cast<double>(m), r));
  }
  return sum.value();
}

double mean_equal(std::size_t n) {
  require_count(n);
  return static_cast<double>(n) * harmonic_number(n, 1);
}

double variance_equal(std::size_t n) {
  require_count(n);
  const double nn = static_cast<double>(n);
  return nn * nn * harmonic_number(n, 2) - nn * harmonic_number(n, 1);
}

namespace {

// Returns {sum_{1<=k<=j<=n} 1/(jk), H_n}. The inner sum over k is the running
// harmonic number H_j, so the double sum costs one pass.
struct NestedSums {
  double pairs;
  double harmonic;
};

NestedSums nested_pair_sum(std::size_t n) {
  CompensatedSum<> running_h;
  CompensatedSum<> pairs;
  for (std::size_t j = 1; j <= n; ++j) {
    const double inv_j = 1.0 / static_cast<double>(j);
    running_h.add(inv_j);
    pairs.add(running_h.value() * inv_j);
  }
  return {pairs.value(), running_h.value()};
}

}  // namespace

double second_moment_poissonized_equal(std::size_t n) {
  require_count(n);
  const double nn = static_cast<double>(n);
  return 2.0 * nn * nn * nested_pair_sum(n).pairs;
}

double variance_equal_via_recurrence(std::size_t n) {
  require_count(n);
  const double nn = static_cast<double>(n);
  const NestedSums sums = nested_pair_sum(n);
  const double mean = nn * sums.harmonic;
  // The leading two terms nearly cancel for large n; difference them first.
  CompensatedSum<> v(2.0 * nn * nn * sums.pairs);
  v.add(-mean * mean);
  v.add(-mean);
  return v.value();
}

MomentSummary moments_equal(std::size_t n) {
  MomentSummary s;
  s.n = n;
  s.mean = mean_equal(n);
  s.variance = variance_equal(n);
  s.poissonized_second_moment = second_moment_poissonized_equal(n);
  s.method = Method::ClosedForm;
  return s;
}

}  // namespace coupon
