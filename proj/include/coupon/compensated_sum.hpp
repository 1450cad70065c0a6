#pragma once

#include <cmath>

namespace coupon {

// Error-free transformation: a + b == sum + err exactly.
struct TwoSum {
  double sum;
  double err;
};

inline TwoSum two_sum(double a, double b) noexcept {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

// Neumaier's variant of Kahan summation. The running compensation is kept
// separately and folded in by value().
template <typename Real = double>
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(Real initial) : sum_(initial) {}

  void add(Real x) noexcept {
    const Real t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(Real x) noexcept {
    add(x);
    return *this;
  }

  // Folds another accumulator in; order of merges is the caller's business.
  void merge(const CompensatedSum& other) noexcept {
    add(other.sum_);
    comp_ += other.comp_;
  }

  Real value() const noexcept { return sum_ + comp_; }
  Real raw_sum() const noexcept { return sum_; }
  Real compensation() const noexcept { return comp_; }

 private:
  Real sum_{0};
  Real comp_{0};
};

}  // namespace coupon
