#include "mwsn/routing/drain.hpp"

#include <stdexcept>

namespace mwsn::routing {

double estimate_lifetime(double surplus, double drain_rate) {
  if (drain_rate <= 0.0) return kInfinity;
  return surplus / drain_rate;
}

DrainState update_drain_rate(DrainState state, double consumed, double window_s,
                             double surplus) {
  if (!(window_s > 0.0)) throw std::invalid_argument("drain window must be positive");
  if (consumed < 0.0) throw std::invalid_argument("consumed energy must be non-negative");
  const double sample = consumed / window_s;
  state.prev_drain = state.drain_rate;
  state.drain_rate = state.primed
                         ? state.ewma_alpha * state.prev_drain + (1.0 - state.ewma_alpha) * sample
                         : sample;
  state.primed = true;
  state.lifetime_estimate = estimate_lifetime(surplus, state.drain_rate);
  return state;
}

Readiness compute_readiness(double surplus, double lifetime) {
  if (surplus < kReadySurplus || lifetime < kDiscardLifetime) return Readiness::Discard;
  if (lifetime > kHighLifetime) return Readiness::High;
  return Readiness::Moderate;
}

}  // namespace mwsn::routing
