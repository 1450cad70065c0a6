#include "coupon/exact_general.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

namespace coupon {

EnumerationPlan make_enumeration_plan(std::size_t n, const EnumerationOptions& options) {
  if (options.max_n > kHardMaxSubsetUniverse) {
    std::ostringstream msg;
    msg << "enumeration cap " << options.max_n << " exceeds the hard limit "
        << kHardMaxSubsetUniverse;
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  if (n == 0) throw Error(ErrorCode::InvalidCount, "subset universe must be nonempty");
  if (n > options.max_n) {
    std::ostringstream msg;
    msg << "n = " << n << " exceeds the subset enumeration cap " << options.max_n;
    throw Error(ErrorCode::UniverseTooLarge, msg.str());
  }
  // Shards of at least 2^12 subsets, at most 256 of them.
  const std::size_t shard_bits = n > 12 ? std::min<std::size_t>(8, n - 12) : 0;
  return EnumerationPlan{n, std::size_t{1} << shard_bits, options.max_n};
}

std::vector<SubsetTerm> subset_terms(const ProbabilityVector& pv,
                                     const EnumerationOptions& options) {
  std::vector<SubsetTerm> terms;
  terms.reserve((std::size_t{1} << std::min<std::size_t>(pv.size(), 20)) - 1);
  for_each_subset_term(pv, [&](const SubsetTerm& t) { terms.push_back(t); }, options);
  return terms;
}

namespace {

struct ShardSums {
  CompensatedSum<> pos_inv;
  CompensatedSum<> neg_inv;
  CompensatedSum<> pos_inv_sq;
  CompensatedSum<> neg_inv_sq;
};

ShardSums sum_shard(const double* p, std::uint64_t first, std::uint64_t last) {
  ShardSums s;
  detail::enumerate_gray_range(p, first, last,
                               [&](bool odd, unsigned, double q, std::uint64_t) {
                                 const double inv = 1.0 / q;
                                 if (odd) {
                                   s.pos_inv.add(inv);
                                   s.pos_inv_sq.add(inv * inv);
                                 } else {
                                   s.neg_inv.add(inv);
                                   s.neg_inv_sq.add(inv * inv);
                                 }
                               });
  return s;
}

double difference(const CompensatedSum<>& pos, const CompensatedSum<>& neg) {
  CompensatedSum<> d(pos.raw_sum());
  d.add(-neg.raw_sum());
  d.add(pos.compensation());
  d.add(-neg.compensation());
  return d.value();
}

}  // namespace

InclusionExclusionSums inclusion_exclusion_sums(const ProbabilityVector& pv,
                                                const EnumerationOptions& options) {
  const EnumerationPlan plan = make_enumeration_plan(pv.size(), options);
  InclusionExclusionSums result;
  if (plan.n > kDefaultMaxSubsetUniverse) {
    std::ostringstream msg;
    msg << "enumerating 2^" << plan.n << " subsets above the default cap of "
        << kDefaultMaxSubsetUniverse << "; expect long runtimes and cancellation for skewed inputs";
    result.warnings.push_back(msg.str());
  }

  const double* p = pv.probs().data();
  const std::uint64_t shard_size = plan.shard_size();
  std::vector<ShardSums> shards(plan.partitions);

  unsigned workers = options.workers != 0 ? options.workers : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(plan.partitions));
  if (workers == 1) {
    for (std::size_t s = 0; s < plan.partitions; ++s) {
      shards[s] = sum_shard(p, s * shard_size, (s + 1) * shard_size);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t s = next++; s < plan.partitions; s = next++) {
          shards[s] = sum_shard(p, s * shard_size, (s + 1) * shard_size);
        }
      });
    }
  }

  ShardSums total;
  for (const ShardSums& s : shards) {
    total.pos_inv.merge(s.pos_inv);
    total.neg_inv.merge(s.neg_inv);
    total.pos_inv_sq.merge(s.pos_inv_sq);
    total.neg_inv_sq.merge(s.neg_inv_sq);
  }
  result.mean = difference(total.pos_inv, total.neg_inv);
  result.half_second_moment = difference(total.pos_inv_sq, total.neg_inv_sq);
  result.subsets = (std::uint64_t{1} << plan.n) - 1;
  return result;
}

double mean_general(const ProbabilityVector& pv, const EnumerationOptions& options) {
  return inclusion_exclusion_sums(pv, options).mean;
}

double second_moment_poissonized_general(const ProbabilityVector& pv,
                                         const EnumerationOptions& options) {
  return 2.0 * inclusion_exclusion_sums(pv, options).half_second_moment;
}

MomentSummary moments_general(const ProbabilityVector& pv, const EnumerationOptions& options) {
  InclusionExclusionSums sums = inclusion_exclusion_sums(pv, options);
  const double second = 2.0 * sums.half_second_moment;
  const double mean = sums.mean;

  // second - mean^2 - mean, with mean^2 split exactly into hi + lo.
  const double sq_hi = mean * mean;
  const double sq_lo = std::fma(mean, mean, -sq_hi);
  CompensatedSum<> v(second);
  v.add(-sq_hi);
  v.add(-sq_lo);
  v.add(-mean);
  double variance = v.value();

  MomentSummary out;
  out.n = pv.size();
  out.mean = mean;
  out.poissonized_second_moment = second;
  out.method = Method::InclusionExclusion;
  out.warnings = std::move(sums.warnings);
  if (variance < 0.0) {
    std::ostringstream msg;
    msg.precision(17);
    if (variance >= -1e-9 * mean * mean) {
      msg << "variance " << variance << " clamped to 0 (cancellation in alternating sums)";
      out.warnings.push_back(msg.str());
      variance = 0.0;
    } else {
      msg << "inclusion-exclusion variance is negative (" << variance
          << "); the alternating sums lost too much precision";
      throw Error(ErrorCode::StabilityError, msg.str());
    }
  }
  out.variance = variance;
  return out;
}

double variance_general(const ProbabilityVector& pv, const EnumerationOptions& options) {
  return moments_general(pv, options).variance;
}

}  // namespace coupon
