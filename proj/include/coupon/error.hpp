#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace coupon {

enum class ErrorCode {
  EmptyInput,
  NonPositiveEntry,
  SumOutOfTolerance,
  EntryTooSmall,
  InvalidCount,
  InvalidArgument,
  UniverseTooLarge,
  StabilityError,
  ToleranceNotReached,
  OutOfRange,
  IncompatibleReports,
};

std::string_view error_name(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above; the
// CLI prints error_name(code()) on stderr.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(what), code_(code), index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  // Offending element, for errors that concern a single entry.
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

}  // namespace coupon
