#include "coupon/probability_vector.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "coupon/error.hpp"

namespace coupon {
namespace {

ErrorCode code_of(const std::vector<double>& v, bool renormalize = false) {
  try {
    make_probability_vector(v, renormalize);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidArgument;
}

TEST(ProbabilityVector, AcceptsValidInputs) {
  const std::vector<double> two{0.5, 0.5};
  EXPECT_EQ(make_probability_vector(two).size(), 2u);
  const std::vector<double> three{0.5, 0.3, 0.2};
  const auto pv = make_probability_vector(three);
  EXPECT_EQ(pv.size(), 3u);
  EXPECT_DOUBLE_EQ(pv.min(), 0.2);
}

TEST(ProbabilityVector, ZeroEntryReportsIndex) {
  const std::vector<double> v{0.5, 0.0, 0.5};
  try {
    make_probability_vector(v);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveEntry);
    ASSERT_TRUE(e.index().has_value());
    EXPECT_EQ(*e.index(), 1u);
  }
}

TEST(ProbabilityVector, ErrorPaths) {
  EXPECT_EQ(code_of({}), ErrorCode::EmptyInput);
  EXPECT_EQ(code_of({0.6, -0.1, 0.5}), ErrorCode::NonPositiveEntry);
  EXPECT_EQ(code_of({0.5, 0.6}), ErrorCode::SumOutOfTolerance);
  EXPECT_EQ(code_of({1.0, 1e-13}), ErrorCode::EntryTooSmall);
  EXPECT_EQ(code_of({1.0, std::numeric_limits<double>::quiet_NaN()}), ErrorCode::NonPositiveEntry);
  EXPECT_EQ(code_of({0.5, 0.5 + 2e-9}), ErrorCode::SumOutOfTolerance);
  EXPECT_NO_THROW(make_probability_vector(std::vector<double>{0.5, 0.5 + 5e-10}));
}

TEST(ProbabilityVector, RenormalizationIsOptIn) {
  const std::vector<double> weights{2.0, 1.0, 1.0};
  EXPECT_EQ(code_of(weights), ErrorCode::SumOutOfTolerance);
  const auto pv = make_probability_vector(weights, true);
  EXPECT_DOUBLE_EQ(pv[0], 0.5);
  EXPECT_DOUBLE_EQ(pv[1], 0.25);
}

TEST(ProbabilityVector, RenormalizeNeverFailsOnSumForPositiveInputs) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> weight(1e-3, 1e6);
  std::uniform_int_distribution<int> length(1, 200);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v(length(rng));
    for (double& x : v) x = weight(rng);
    EXPECT_NO_THROW(make_probability_vector(v, true));
  }
}

TEST(ProbabilityVector, Uniform) {
  EXPECT_EQ(uniform_probability_vector(1)[0], 1.0);
  const auto two = uniform_probability_vector(2);
  EXPECT_EQ(two[0], 0.5);
  EXPECT_EQ(two[1], 0.5);
  const auto four = uniform_probability_vector(4);
  for (double p : four.probs()) EXPECT_EQ(p, 0.25);
  EXPECT_THROW(uniform_probability_vector(0), Error);
}

TEST(ProbabilityVector, UniformRoundTrips) {
  for (std::size_t n = 1; n <= 1000; ++n) {
    const auto u = uniform_probability_vector(n);
    const auto again = make_probability_vector(u.probs());
    ASSERT_EQ(again.size(), n);
    ASSERT_TRUE(std::equal(u.probs().begin(), u.probs().end(), again.probs().begin()));
  }
}

TEST(ProbabilityVector, IsUniform) {
  EXPECT_TRUE(is_uniform(uniform_probability_vector(5), 1e-12));
  EXPECT_FALSE(is_uniform(make_probability_vector(std::vector<double>{0.5, 0.3, 0.2}), 1e-12));
  EXPECT_TRUE(
      is_uniform(make_probability_vector(std::vector<double>{0.5 + 1e-13, 0.5 - 1e-13}), 1e-12));
}

}  // namespace
}  // namespace coupon
