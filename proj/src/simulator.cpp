#include "coupon/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "coupon/error.hpp"

namespace coupon {

// --- alias table --------------------------------------------------------------

AliasTable::AliasTable(std::span<const double> probs)
    : threshold_(probs.size()), alias_(probs.size()) {
  const std::size_t n = probs.size();
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = probs[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }

  constexpr double kTwo64 = 0x1.0p64;
  auto set_column = [&](std::uint32_t i, double keep, std::uint32_t other) {
    const double t = keep * kTwo64;
    threshold_[i] = t >= kTwo64 ? std::numeric_limits<std::uint64_t>::max()
                                : static_cast<std::uint64_t>(t);
    alias_[i] = other;
  };

  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    set_column(s, scaled[s], l);
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are full columns up to rounding.
  for (std::uint32_t i : large) set_column(i, 1.0, i);
  for (std::uint32_t i : small) set_column(i, 1.0, i);
}

double AliasTable::probability(std::size_t i) const {
  const double n = static_cast<double>(size());
  double mass = 0.0;
  for (std::size_t c = 0; c < size(); ++c) {
    const double keep = static_cast<double>(threshold_[c]) * 0x1.0p-64;
    if (c == i) mass += keep;
    if (alias_[c] == i) mass += 1.0 - keep;
  }
  return mass / n;
}

// --- samplers -------------------------------------------------------------------

CollectionSampler::CollectionSampler(const ProbabilityVector& pv) : table_(pv.probs()) {}

std::uint64_t CollectionSampler::operator()(Xoshiro256pp& rng) const {
  const std::size_t n = table_.size();
  std::vector<std::uint64_t> seen((n + 63) / 64, 0);
  std::size_t remaining = n;
  std::uint64_t draws = 0;
  while (remaining != 0) {
    const std::size_t type = table_.sample(rng());
    ++draws;
    std::uint64_t& word = seen[type >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (type & 63);
    if (!(word & bit)) {
      word |= bit;
      --remaining;
    }
  }
  return draws;
}

EqualStageSampler::EqualStageSampler(std::size_t n) : n_(n) {
  if (n == 0) throw Error(ErrorCode::InvalidCount, "coupon count must be at least 1");
  inv_log_repeat_.reserve(n - 1);
  for (std::size_t m = 1; m < n; ++m) {
    inv_log_repeat_.push_back(1.0 / std::log(static_cast<double>(m) / static_cast<double>(n)));
  }
}

std::uint64_t EqualStageSampler::operator()(Xoshiro256pp& rng) const {
  // The first stage always succeeds on the first draw.
  std::uint64_t draws = 1;
  for (double inv_log : inv_log_repeat_) {
    const double g = std::ceil(std::log(rng.uniform_open()) * inv_log);
    draws += std::max<std::uint64_t>(1, static_cast<std::uint64_t>(g));
  }
  return draws;
}

std::uint64_t sample_collection_length(const ProbabilityVector& pv, Xoshiro256pp& rng) {
  return CollectionSampler(pv)(rng);
}

std::uint64_t sample_equal_fast(std::size_t n, Xoshiro256pp& rng) {
  return EqualStageSampler(n)(rng);
}

// --- reports --------------------------------------------------------------------

namespace {

void finalize(SimulationReport& r) {
  if (r.trials == 0) {
    r.sample_mean = r.sample_variance = r.std_error_of_mean = r.std_error_of_variance = 0.0;
    return;
  }
  const double t = static_cast<double>(r.trials);
  r.sample_variance = r.trials > 1 ? r.central_m2 / (t - 1.0) : 0.0;
  r.std_error_of_mean = std::sqrt(r.sample_variance / t);
  if (r.trials > 3) {
    const double mu4 = r.central_m4 / t;
    const double s2 = r.sample_variance;
    const double var_of_var = (mu4 - s2 * s2 * (t - 3.0) / (t - 1.0)) / t;
    r.std_error_of_variance = std::sqrt(std::max(0.0, var_of_var));
  } else {
    r.std_error_of_variance = 0.0;
  }
}

}  // namespace

SimulationReport report_from_draws(std::size_t n, std::span<const std::uint64_t> draws,
                                   bool want_histogram) {
  SimulationReport r;
  r.n = n;
  r.trials = draws.size();
  if (want_histogram) r.histogram.emplace();
  if (draws.empty()) return r;

  // Integer draw counts: the total is exact, then deviations in a second pass.
  std::uint64_t total = 0;
  r.min_draws = std::numeric_limits<std::uint64_t>::max();
  for (std::uint64_t d : draws) {
    total += d;
    r.min_draws = std::min(r.min_draws, d);
    r.max_draws = std::max(r.max_draws, d);
    if (want_histogram) ++(*r.histogram)[d];
  }
  r.sample_mean = static_cast<double>(total) / static_cast<double>(draws.size());
  for (std::uint64_t d : draws) {
    const double dev = static_cast<double>(d) - r.sample_mean;
    const double dev2 = dev * dev;
    r.central_m2 += dev2;
    r.central_m3 += dev2 * dev;
    r.central_m4 += dev2 * dev2;
  }
  finalize(r);
  return r;
}

SimulationReport merge_reports(const SimulationReport& a, const SimulationReport& b) {
  if (b.trials == 0) return a;
  if (a.trials == 0) return b;
  if (a.n != b.n) {
    throw Error(ErrorCode::IncompatibleReports, "reports come from different coupon counts");
  }
  if (a.histogram.has_value() != b.histogram.has_value()) {
    throw Error(ErrorCode::IncompatibleReports, "only one of the reports carries a histogram");
  }

  // Pairwise update of central moments (Chan et al.; Pebay for orders 3, 4).
  const double na = static_cast<double>(a.trials);
  const double nb = static_cast<double>(b.trials);
  const double n = na + nb;
  const double delta = b.sample_mean - a.sample_mean;
  const double d_n = delta / n;
  const double d2 = delta * delta;

  SimulationReport r;
  r.n = a.n;
  r.trials = a.trials + b.trials;
  r.sample_mean = a.sample_mean + d_n * nb;
  r.central_m2 = a.central_m2 + b.central_m2 + d2 * na * nb / n;
  r.central_m3 = a.central_m3 + b.central_m3 + d2 * delta * na * nb * (na - nb) / (n * n) +
                 3.0 * d_n * (na * b.central_m2 - nb * a.central_m2);
  r.central_m4 = a.central_m4 + b.central_m4 +
                 d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                 6.0 * d2 * (na * na * b.central_m2 + nb * nb * a.central_m2) / (n * n) +
                 4.0 * d_n * (na * b.central_m3 - nb * a.central_m3);
  r.min_draws = std::min(a.min_draws, b.min_draws);
  r.max_draws = std::max(a.max_draws, b.max_draws);
  if (a.histogram) {
    r.histogram = *a.histogram;
    for (const auto& [draws, count] : *b.histogram) (*r.histogram)[draws] += count;
  }
  finalize(r);
  return r;
}

namespace {

constexpr std::uint64_t kTrialsPerBlock = 8192;

template <typename Sampler>
SimulationReport run_blocks(const Sampler& sampler, const TrialConfig& config) {
  const std::uint64_t blocks = (config.trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
  std::vector<SimulationReport> partial(blocks);

  auto run_block = [&](std::uint64_t b) {
    const std::uint64_t begin = b * kTrialsPerBlock;
    const std::uint64_t end = std::min(config.trials, begin + kTrialsPerBlock);
    std::vector<std::uint64_t> draws;
    draws.reserve(end - begin);
    for (std::uint64_t t = begin; t < end; ++t) {
      Xoshiro256pp rng = Xoshiro256pp::for_trial(config.seed, config.first_trial + t);
      draws.push_back(sampler(rng));
    }
    partial[b] = report_from_draws(sampler.size(), draws, config.want_histogram);
  };

  unsigned workers = config.workers != 0 ? config.workers : std::thread::hardware_concurrency();
  workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, blocks));
  if (workers == 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::uint64_t b = next++; b < blocks; b = next++) run_block(b);
      });
    }
  }

  SimulationReport total;
  total.n = sampler.size();
  if (config.want_histogram) total.histogram.emplace();
  for (const SimulationReport& block : partial) total = merge_reports(total, block);
  return total;
}

}  // namespace

SimulationReport run_trials(const SimulationTarget& target, const TrialConfig& config) {
  if (config.trials < 2) {
    throw Error(ErrorCode::InvalidArgument, "at least two trials are required");
  }
  if (const auto* pv = std::get_if<ProbabilityVector>(&target)) {
    return run_blocks(CollectionSampler(*pv), config);
  }
  return run_blocks(EqualStageSampler(std::get<std::size_t>(target)), config);
}

}  // namespace coupon
