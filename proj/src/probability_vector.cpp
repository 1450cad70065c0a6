#include "coupon/probability_vector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coupon/compensated_sum.hpp"
#include "coupon/error.hpp"
#include "coupon/moments.hpp"

namespace coupon {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NonPositiveEntry: return "NonPositiveEntry";
    case ErrorCode::SumOutOfTolerance: return "SumOutOfTolerance";
    case ErrorCode::EntryTooSmall: return "EntryTooSmall";
    case ErrorCode::InvalidCount: return "InvalidCount";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UniverseTooLarge: return "UniverseTooLarge";
    case ErrorCode::StabilityError: return "StabilityError";
    case ErrorCode::ToleranceNotReached: return "ToleranceNotReached";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::IncompatibleReports: return "IncompatibleReports";
  }
  return "Unknown";
}

std::string_view method_name(Method m) noexcept {
  switch (m) {
    case Method::ClosedForm: return "closed-form";
    case Method::InclusionExclusion: return "inclusion-exclusion";
    case Method::Recurrence: return "recurrence";
    case Method::Integration: return "integration";
    case Method::Oracle: return "oracle";
    case Method::Simulation: return "simulation";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
  for (Method m : {Method::ClosedForm, Method::InclusionExclusion, Method::Recurrence,
                   Method::Integration, Method::Oracle, Method::Simulation}) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

ProbabilityVector::ProbabilityVector(std::vector<double> probs)
    : probs_(std::move(probs)),
      min_(*std::min_element(probs_.begin(), probs_.end())) {}

namespace {

double compensated_total(std::span<const double> values) {
  CompensatedSum<> total;
  for (double v : values) total.add(v);
  return total.value();
}

}  // namespace

ProbabilityVector make_probability_vector(std::span<const double> values, bool renormalize) {
  if (values.empty()) {
    throw Error(ErrorCode::EmptyInput, "probability list is empty");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || !(values[i] > 0.0)) {
      std::ostringstream msg;
      msg << "entry " << i << " is not a finite positive number (" << values[i] << ")";
      throw Error(ErrorCode::NonPositiveEntry, msg.str(), i);
    }
  }

  std::vector<double> probs(values.begin(), values.end());
  if (renormalize) {
    const double total = compensated_total(probs);
    for (double& p : probs) p /= total;
  }

  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] < kMinimumEntry) {
      std::ostringstream msg;
      msg << "entry " << i << " = " << probs[i] << " is below the minimum " << kMinimumEntry;
      throw Error(ErrorCode::EntryTooSmall, msg.str(), i);
    }
  }

  const double total = compensated_total(probs);
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "probabilities sum to " << total << ", not 1 within " << kNormalizationTolerance;
    throw Error(ErrorCode::SumOutOfTolerance, msg.str());
  }
  return ProbabilityVector(std::move(probs));
}

ProbabilityVector uniform_probability_vector(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidCount, "coupon count must be at least 1");
  return ProbabilityVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

bool is_uniform(const ProbabilityVector& pv, double eps) {
  const double target = 1.0 / static_cast<double>(pv.size());
  return std::all_of(pv.probs().begin(), pv.probs().end(),
                     [&](double p) { return std::abs(p - target) <= eps; });
}

}  // namespace coupon
