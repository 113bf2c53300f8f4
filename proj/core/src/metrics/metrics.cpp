#include "mwsn/metrics/metrics.hpp"

#include <algorithm>
#include <string>

namespace mwsn::metrics {

std::optional<double> compute_pdf(std::uint64_t delivered, std::uint64_t generated) {
  if (delivered > generated) {
    throw AccountingError("delivered (" + std::to_string(delivered) + ") exceeds generated (" +
                          std::to_string(generated) + ")");
  }
  if (generated == 0) return std::nullopt;
  return static_cast<double>(delivered) / static_cast<double>(generated);
}

NetworkLifetime compute_network_lifetime(std::span<const std::optional<double>> death_times,
                                         double sim_duration) {
  std::optional<double> first;
  for (const auto& t : death_times) {
    if (t && (!first || *t < *first)) first = t;
  }
  if (!first) return {sim_duration, true};
  return {std::min(*first, sim_duration), false};
}

}  // namespace mwsn::metrics
