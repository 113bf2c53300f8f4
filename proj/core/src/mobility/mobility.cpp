#include "mwsn/mobility/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mwsn::mobility {

namespace {

Vec2 random_point(const WaypointParams& p, Rng& rng) {
  return {rng.uniform(0.0, p.field_side), rng.uniform(0.0, p.field_side)};
}

void start_leg(MotionState& s, const WaypointParams& p, Rng& rng) {
  s.waypoint = random_point(p, rng);
  s.speed = rng.uniform(p.speed_min, p.speed_max);
  s.phase = Phase::Moving;
  if (s.speed <= 0.0) {
    // Degenerate speed range; a zero-speed leg would never arrive.
    s.speed = 0.0;
    s.phase = Phase::Paused;
    s.pause_until = kInfinity;
  }
}

Vec2 clamp_to_field(Vec2 v, double side) {
  return {std::clamp(v.x, 0.0, side), std::clamp(v.y, 0.0, side)};
}

}  // namespace

MotionState initial_state(const WaypointParams& params, Rng& rng) {
  MotionState s;
  s.position = random_point(params, rng);
  start_leg(s, params, rng);
  return s;
}

MotionState step_motion(MotionState s, double now, double dt, const WaypointParams& params,
                        Rng& rng) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_motion: dt must be positive");
  double t = now;
  const double end = now + dt;
  // Bounded loop: every iteration either consumes the remaining time or
  // completes a leg/pause, and pauses have positive length unless pause_time
  // is zero, in which case legs still consume time.
  for (int guard = 0; t < end && guard < 1024; ++guard) {
    if (s.phase == Phase::Paused) {
      if (s.pause_until >= end) break;
      t = std::max(t, s.pause_until);
      start_leg(s, params, rng);
      continue;
    }
    const Vec2 to_go = s.waypoint - s.position;
    const double remaining = norm(to_go);
    const double arrive_in = remaining / s.speed;
    if (t + arrive_in <= end) {
      t += arrive_in;
      s.position = s.waypoint;
      s.phase = Phase::Paused;
      s.speed = 0.0;
      s.pause_until = t + params.pause_time;
      if (params.pause_time <= 0.0 && remaining == 0.0) {
        // Zero pause and zero-length leg: avoid spinning on the same instant.
        s.pause_until = t;
        start_leg(s, params, rng);
      }
    } else {
      const double frac = (end - t) * s.speed / remaining;
      s.position = s.position + frac * to_go;
      t = end;
    }
  }
  s.position = clamp_to_field(s.position, params.field_side);
  return s;
}

Vec2 velocity(const MotionState& s) {
  if (s.phase != Phase::Moving || s.speed == 0.0) return {};
  const Vec2 d = s.waypoint - s.position;
  const double n = norm(d);
  if (n == 0.0) return {};
  return (s.speed / n) * d;
}

RelativeMobility relative_mobility(std::size_t self_index, std::span<const Vec2> now,
                                   std::span<const Vec2> prev, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("relative_mobility: delta must be positive");
  if (now.size() != prev.size()) {
    throw std::invalid_argument("relative_mobility: snapshot sizes differ");
  }
  if (self_index >= now.size()) throw std::out_of_range("relative_mobility: bad self index");
  const std::size_t n = now.size();
  if (n < 2) return {0.0, true};
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == self_index) continue;
    const double d_now = distance(now[self_index], now[j]);
    const double d_prev = distance(prev[self_index], prev[j]);
    sum += std::abs(d_now - d_prev) / delta;
  }
  return {sum / static_cast<double>(n - 1), false};
}

double network_mobility(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("network_mobility: no samples");
  return std::accumulate(samples.begin(), samples.end(), 0.0) /
         static_cast<double>(samples.size());
}

}  // namespace mwsn::mobility
