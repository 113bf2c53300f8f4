#pragma once

#include <span>
#include <vector>

#include "mwsn/engine/rng.hpp"
#include "mwsn/types.hpp"

namespace mwsn::mobility {

enum class Phase { Moving, Paused };

struct WaypointParams {
  double field_side = 25.0;
  double pause_time = 30.0;
  double speed_min = 5.0;
  double speed_max = 20.0;
};

/// Random waypoint state of one node. Positions stay inside [0, field_side]^2;
/// speed is zero while paused.
struct MotionState {
  Vec2 position;
  Vec2 waypoint;
  double speed = 0.0;
  Phase phase = Phase::Paused;
  double pause_until = 0.0;

  friend bool operator==(const MotionState&, const MotionState&) = default;
};

/// Uniform position and a fresh leg (waypoint and speed) drawn from `rng`.
MotionState initial_state(const WaypointParams& params, Rng& rng);

/// Advances `state` from `now` to `now + dt`. Handles any number of
/// arrive/pause/depart transitions inside the interval. Requires dt > 0.
MotionState step_motion(MotionState state, double now, double dt,
                        const WaypointParams& params, Rng& rng);

/// Velocity vector implied by the state (zero while paused).
Vec2 velocity(const MotionState& state);

struct RelativeMobility {
  double value = 0.0;
  /// Set when fewer than two nodes are in scope; `value` is then 0.
  bool singleton_scope = false;
};

/// Mean absolute range-rate of every other node in `scope` as seen by
/// `scope[self_index]`, with the derivative of d_ij approximated by the
/// backward difference (d_ij(t) - d_ij(t - delta)) / delta.
/// `now` and `prev` are indexed like `scope` is laid out (parallel arrays).
RelativeMobility relative_mobility(std::size_t self_index, std::span<const Vec2> now,
                                   std::span<const Vec2> prev, double delta);

/// Arithmetic mean of the per-node samples. Throws std::invalid_argument on
/// empty input.
double network_mobility(std::span<const double> samples);

}  // namespace mwsn::mobility
