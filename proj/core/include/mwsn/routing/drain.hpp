#pragma once

#include "mwsn/routing/messages.hpp"
#include "mwsn/types.hpp"

namespace mwsn::routing {

/// Smoothed battery drain of one node.
struct DrainState {
  double drain_rate = 0.0;        // J/s, EWMA
  double prev_drain = 0.0;        // J/s, previous smoothed value
  double lifetime_estimate = kInfinity;  // s, surplus / drain_rate
  double ewma_alpha = 0.3;
  bool primed = false;            // false until the first window completes
};

/// Folds the energy consumed over the last window of `window_s` seconds into
/// the EWMA: rate = alpha * previous + (1 - alpha) * (consumed / window).
/// The first window seeds the average directly. A zero rate gives an infinite
/// lifetime. Throws std::invalid_argument for window_s <= 0 or consumed < 0.
DrainState update_drain_rate(DrainState state, double consumed, double window_s,
                             double surplus);

/// Seconds the surplus lasts at the given drain rate (+inf when rate <= 0).
double estimate_lifetime(double surplus, double drain_rate);

inline constexpr double kReadySurplus = 1.0;     // J
inline constexpr double kDiscardLifetime = 10.0; // s
inline constexpr double kHighLifetime = 100.0;   // s

/// Discard below 1 J of surplus or 10 s of lifetime; High from 1 J with more
/// than 100 s left; Moderate otherwise.
Readiness compute_readiness(double surplus, double lifetime);

}  // namespace mwsn::routing
