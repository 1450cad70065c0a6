#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace coupon {

enum class Method {
  ClosedForm,
  InclusionExclusion,
  Recurrence,
  Integration,
  Oracle,
  Simulation,
};

std::string_view method_name(Method m) noexcept;
// Accepts the names produced by method_name; nullopt otherwise.
std::optional<Method> parse_method(std::string_view name) noexcept;

// Mean and variance of the number of draws N, tagged with the route that
// produced them. poissonized_second_moment is E(X^2) for the rate-one
// Poisson embedding, when the route computes it.
struct MomentSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;
  std::optional<double> poissonized_second_moment;
  Method method = Method::ClosedForm;
  std::vector<std::string> warnings;
};

// One nonempty subset J in the inclusion-exclusion expansion.
struct SubsetTerm {
  int sign;                  // +1 iff cardinality is odd
  unsigned cardinality;      // |J|
  double subset_sum;         // sum of p_j over J
  unsigned long long mask;   // bit j set iff j in J
};

}  // namespace coupon
