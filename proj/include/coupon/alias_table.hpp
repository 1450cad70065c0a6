#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace coupon {

// Walker/Vose alias table: O(n) build, one 64-bit word per categorical draw.
class AliasTable {
 public:
  explicit AliasTable(std::span<const double> probs);

  std::size_t size() const noexcept { return alias_.size(); }

  // The high 64 bits of bits * n pick the column, the low 64 bits serve as
  // the uniform for the accept test.
  std::size_t sample(std::uint64_t bits) const noexcept {
    const unsigned __int128 wide = static_cast<unsigned __int128>(bits) * alias_.size();
    const auto column = static_cast<std::size_t>(wide >> 64);
    const auto frac = static_cast<std::uint64_t>(wide);
    return frac < threshold_[column] ? column : alias_[column];
  }

  // Probability that a draw returns i, reconstructed from the table.
  double probability(std::size_t i) const;

 private:
  std::vector<std::uint64_t> threshold_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace coupon
