#include "mwsn/phy/radio.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mwsn::phy {

namespace {

void check_budget(double tx_power, double reflection_sq, double carrier_freq) {
  if (!(tx_power > 0.0)) throw std::invalid_argument("friis: transmit power must be positive");
  if (!(carrier_freq > 0.0)) throw std::invalid_argument("friis: frequency must be positive");
  if (!(reflection_sq >= 0.0 && reflection_sq < 1.0)) {
    throw std::invalid_argument("friis: reflection coefficient must lie in [0, 1)");
  }
}

// Everything under the square root except the receiver sensitivity.
double budget(double tx_power, double gain_tx_dbi, double gain_rx_dbi, double reflection_sq) {
  return tx_power * dbi_to_linear(gain_tx_dbi) * dbi_to_linear(gain_rx_dbi) *
         (1.0 - reflection_sq);
}

double wavelength_factor(double carrier_freq) {
  return (kSpeedOfLight / carrier_freq) / (4.0 * std::numbers::pi);
}

}  // namespace

double dbi_to_linear(double dbi) { return std::pow(10.0, dbi / 10.0); }

double friis_max_range(double tx_power, double rx_sensitivity, double gain_tx_dbi,
                       double gain_rx_dbi, double reflection_sq, double carrier_freq) {
  check_budget(tx_power, reflection_sq, carrier_freq);
  if (!(rx_sensitivity > 0.0)) {
    throw std::invalid_argument("friis: receiver sensitivity must be positive");
  }
  return wavelength_factor(carrier_freq) *
         std::sqrt(budget(tx_power, gain_tx_dbi, gain_rx_dbi, reflection_sq) / rx_sensitivity);
}

double rx_sensitivity_for_range(double range, double tx_power, double gain_tx_dbi,
                                double gain_rx_dbi, double reflection_sq, double carrier_freq) {
  check_budget(tx_power, reflection_sq, carrier_freq);
  if (!(range > 0.0)) throw std::invalid_argument("friis: range must be positive");
  const double ratio = range / wavelength_factor(carrier_freq);
  return budget(tx_power, gain_tx_dbi, gain_rx_dbi, reflection_sq) / (ratio * ratio);
}

}  // namespace mwsn::phy
