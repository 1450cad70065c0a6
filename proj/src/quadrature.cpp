#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "coupon/exact_general.hpp"

namespace coupon {

double survival_poissonized(const ProbabilityVector& pv, double t) {
  if (!(t > 0.0)) return 1.0;
  // log prod_j (1 - e^{-p_j t}); each factor is -expm1(-p_j t), accurate for
  // both tiny and large p_j t.
  double log_cdf = 0.0;
  for (double p : pv.probs()) {
    log_cdf += std::log(-std::expm1(-p * t));
  }
  return std::clamp(-std::expm1(log_cdf), 0.0, 1.0);
}

double mean_tail_bound(const ProbabilityVector& pv, double t_max) {
  double bound = 0.0;
  for (double p : pv.probs()) bound += std::exp(-p * t_max) / p;
  return bound;
}

double second_moment_tail_bound(const ProbabilityVector& pv, double t_max) {
  double bound = 0.0;
  for (double p : pv.probs()) {
    bound += 2.0 * std::exp(-p * t_max) * (t_max / p + 1.0 / (p * p));
  }
  return bound;
}

QuadratureSpec make_quadrature_spec(const ProbabilityVector& pv, double abs_tol) {
  if (!(abs_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "quadrature tolerance must be positive");
  }
  const double n = static_cast<double>(pv.size());
  double t_max = std::log(std::max(n / abs_tol, 2.0)) / pv.min();
  const double tail_budget = abs_tol / 4.0;
  while (mean_tail_bound(pv, t_max) > tail_budget ||
         second_moment_tail_bound(pv, t_max) > tail_budget) {
    t_max *= 1.125;
  }
  return QuadratureSpec{abs_tol, t_max};
}

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

constexpr unsigned kMaxDepth = 40;
constexpr int kRefinements = 6;

// Adaptive Gauss-Kronrod on [0, t_max] to an absolute error budget. Boost's
// stopping rule is relative, so the relative target is derived from a coarse
// estimate and tightened until the reported error fits the budget.
template <typename F>
double integrate_to_budget(F f, double t_max, double budget, const char* what) {
  double error = 0.0;
  double l1 = 0.0;
  double estimate = Kronrod::integrate(f, 0.0, t_max, 0, 0.0, &error, &l1);
  if (error <= budget) return estimate;

  double rel = budget / std::max(l1, std::numeric_limits<double>::min());
  for (int attempt = 0; attempt < kRefinements; ++attempt) {
    estimate = Kronrod::integrate(f, 0.0, t_max, kMaxDepth, rel, &error, &l1);
    if (error <= budget) return estimate;
    rel /= 8.0;
  }
  std::ostringstream msg;
  msg.precision(3);
  msg << what << ": quadrature error estimate " << error << " exceeds budget " << budget;
  throw Error(ErrorCode::ToleranceNotReached, msg.str());
}

double quadrature_budget(double abs_tol, double tail, const char* what) {
  const double budget = abs_tol - tail;
  if (!(budget > 0.0)) {
    std::ostringstream msg;
    msg << what << ": truncation tail bound " << tail << " already exceeds tolerance " << abs_tol;
    throw Error(ErrorCode::ToleranceNotReached, msg.str());
  }
  return budget;
}

void check_spec(const QuadratureSpec& spec) {
  if (!(spec.abs_tol > 0.0) || !(spec.t_max > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "quadrature spec needs abs_tol > 0 and t_max > 0");
  }
}

}  // namespace

double mean_via_integration(const ProbabilityVector& pv, const QuadratureSpec& spec) {
  check_spec(spec);
  const double budget =
      quadrature_budget(spec.abs_tol, mean_tail_bound(pv, spec.t_max), "mean_via_integration");
  return integrate_to_budget([&](double t) { return survival_poissonized(pv, t); }, spec.t_max,
                             budget, "mean_via_integration");
}

double mean_via_integration(const ProbabilityVector& pv, double abs_tol) {
  return mean_via_integration(pv, make_quadrature_spec(pv, abs_tol));
}

double second_moment_via_integration(const ProbabilityVector& pv, const QuadratureSpec& spec) {
  check_spec(spec);
  const double budget = quadrature_budget(
      spec.abs_tol, second_moment_tail_bound(pv, spec.t_max), "second_moment_via_integration");
  return integrate_to_budget([&](double t) { return 2.0 * t * survival_poissonized(pv, t); },
                             spec.t_max, budget, "second_moment_via_integration");
}

double second_moment_via_integration(const ProbabilityVector& pv, double abs_tol) {
  return second_moment_via_integration(pv, make_quadrature_spec(pv, abs_tol));
}

}  // namespace coupon
