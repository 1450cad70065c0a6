#include "coupon/identities.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "coupon/compensated_sum.hpp"
#include "coupon/error.hpp"
#include "coupon/exact_equal.hpp"

namespace coupon {

namespace {

void check_order(unsigned r) {
  if (r < 1 || r > kMaxIdentityOrder) {
    std::ostringstream msg;
    msg << "order r = " << r << " outside [1, " << kMaxIdentityOrder << "]";
    throw Error(ErrorCode::OutOfRange, msg.str());
  }
}

}  // namespace

double binomial_alternating_sum(std::size_t n, unsigned r) {
  check_order(r);
  if (n < 1 || n > kMaxBinomialSumN) {
    std::ostringstream msg;
    msg << "n = " << n << " outside [1, " << kMaxBinomialSumN << "]";
    throw Error(ErrorCode::OutOfRange, msg.str());
  }
  using Wide = long double;
  CompensatedSum<Wide> sum;
  unsigned __int128 binom = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    binom = binom * (n - k + 1) / k;  // exact: C(n,k-1)(n-k+1) is divisible by k
    Wide denom = 1;
    for (unsigned i = 0; i < r; ++i) denom *= static_cast<Wide>(k);
    const Wide numer = static_cast<Wide>(binom);
    // Quotient plus its exact residual, so each term enters at twice the
    // working precision.
    const Wide quot = numer / denom;
    const Wide resid = std::fma(-quot, denom, numer) / denom;
    const Wide sign = (k % 2 == 1) ? 1 : -1;
    sum.add(sign * quot);
    sum.add(sign * resid);
  }
  return static_cast<double>(sum.value());
}

double nested_harmonic_sum(std::size_t n, unsigned r) {
  check_order(r);
  if (n < 1) throw Error(ErrorCode::OutOfRange, "n must be at least 1");
  // level[k-1] holds S_{level}(k); S_0(k) = 1.
  std::vector<double> level(n, 1.0);
  for (unsigned depth = 1; depth <= r; ++depth) {
    CompensatedSum<> running;
    for (std::size_t k = 1; k <= n; ++k) {
      running.add(level[k - 1] / static_cast<double>(k));
      level[k - 1] = running.value();
    }
  }
  return level[n - 1];
}

IdentityReport check_harmonic_square_identity(std::size_t n, double tol) {
  IdentityReport rep;
  rep.name = "harmonic-square";
  rep.n = n;
  rep.lhs = 2.0 * nested_harmonic_sum(n, 2);
  const double h1 = harmonic_number(n, 1);
  rep.rhs = harmonic_number(n, 2) + h1 * h1;
  rep.abs_diff = std::abs(rep.lhs - rep.rhs);
  rep.tolerance = tol;
  rep.passed = rep.abs_diff <= tol;
  return rep;
}

IdentityReport check_binomial_sum_identity(std::size_t n, unsigned r, double rel_tol) {
  IdentityReport rep;
  rep.name = "binomial-sum-r" + std::to_string(r);
  rep.n = n;
  rep.lhs = binomial_alternating_sum(n, r);
  rep.rhs = nested_harmonic_sum(n, r);
  rep.abs_diff = std::abs(rep.lhs - rep.rhs);
  rep.tolerance = rel_tol * std::abs(rep.rhs);
  rep.passed = rep.abs_diff <= rep.tolerance;
  return rep;
}

}  // namespace coupon
