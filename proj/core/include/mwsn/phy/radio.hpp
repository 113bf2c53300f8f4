#pragma once

#include "mwsn/types.hpp"

namespace mwsn::phy {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

double dbi_to_linear(double dbi);

/// Free-space (Friis) maximum range:
///   R = (lambda / 4 pi) * sqrt(P_t * G_t * G_r * (1 - |Gamma|^2) / P_r)
/// with lambda = c / carrier_freq and gains given in dBi.
/// Throws std::invalid_argument for non-positive powers or frequency, or a
/// reflection coefficient outside [0, 1).
double friis_max_range(double tx_power, double rx_sensitivity, double gain_tx_dbi,
                       double gain_rx_dbi, double reflection_sq, double carrier_freq);

/// Receiver sensitivity at which friis_max_range returns `range`.
double rx_sensitivity_for_range(double range, double tx_power, double gain_tx_dbi,
                                double gain_rx_dbi, double reflection_sq, double carrier_freq);

struct LinkModel {
  double max_range = 250.0;
  double path_loss_alpha = 2.0;
};

/// Closed boundary: a node exactly at max_range is reachable.
inline bool in_range(Vec2 a, Vec2 b, const LinkModel& link) {
  return distance(a, b) <= link.max_range;
}

}  // namespace mwsn::phy
