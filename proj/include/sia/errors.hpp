#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace sia {

/// No allocation satisfies the demand and capacity constraints for the
/// requested number of rounds.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what, int resource = -1,
                           std::optional<std::int64_t> rounds_needed = std::nullopt)
      : std::runtime_error(what), resource_(resource), rounds_needed_(rounds_needed) {}

  /// Zero-based resource index behind the failure, or -1 when no single
  /// resource is to blame.
  int resource() const noexcept { return resource_; }
  std::optional<std::int64_t> rounds_needed() const noexcept { return rounds_needed_; }

 private:
  int resource_;
  std::optional<std::int64_t> rounds_needed_;
};

/// The greedy heuristics ran out of capacity while serving a demand. The
/// caller should retry with more rounds.
class CapacityExhaustedError : public std::runtime_error {
 public:
  CapacityExhaustedError(const std::string& what, int service, int resource)
      : std::runtime_error(what), service_(service), resource_(resource) {}

  int service() const noexcept { return service_; }
  int resource() const noexcept { return resource_; }

 private:
  int service_;
  int resource_;
};

/// The brute-force enumeration would exceed its configured size limit.
class SearchSpaceTooLargeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The exact search exhausted its node budget before finding any feasible
/// allocation.
class BudgetExhaustedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sia
