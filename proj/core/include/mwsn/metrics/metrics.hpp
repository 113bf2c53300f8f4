#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>

namespace mwsn::metrics {

/// Raised when the packet accounting is internally inconsistent.
class AccountingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// delivered / generated, or nullopt when nothing was generated.
/// Throws AccountingError when delivered > generated.
std::optional<double> compute_pdf(std::uint64_t delivered, std::uint64_t generated);

struct NetworkLifetime {
  double value = 0.0;
  bool censored = false;  // no node died; value is the run length
};

/// Time of the first battery exhaustion, or sim_duration (censored) when no
/// node died.
NetworkLifetime compute_network_lifetime(std::span<const std::optional<double>> death_times,
                                         double sim_duration);

}  // namespace mwsn::metrics
