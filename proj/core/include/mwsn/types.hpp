#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>

namespace mwsn {

using NodeId = std::uint32_t;
using PacketId = std::uint64_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Grid coordinates of a precinct (square zone).
struct PrecinctCoord {
  std::uint32_t row = 0;
  std::uint32_t col = 0;

  friend constexpr auto operator<=>(PrecinctCoord, PrecinctCoord) = default;
};

}  // namespace mwsn
