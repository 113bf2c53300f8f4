#include "mwsn/phy/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mwsn::phy {

double tx_energy_per_bit(double distance, double e_elec, double e_amp, double alpha) {
  if (distance < 0.0) throw std::invalid_argument("tx_energy_per_bit: negative distance");
  return e_elec + e_amp * std::pow(distance, alpha);
}

double mean_power_index(double e_s, double e_g_per_bit, double e_r, double e_ij, double r_i,
                        double r_j, double initial_energy) {
  if (!(initial_energy > 0.0)) {
    throw std::invalid_argument("mean_power_index: initial energy must be positive");
  }
  if (e_s < 0 || e_g_per_bit < 0 || e_r < 0 || e_ij < 0 || r_i < 0 || r_j < 0) {
    throw std::invalid_argument("mean_power_index: inputs must be non-negative");
  }
  return (e_s + e_g_per_bit * r_i + e_r * r_j + r_i * e_ij) / initial_energy;
}

EnergyLedger::EnergyLedger(double initial) : initial_(initial), dead_(initial <= 0.0) {}

double EnergyLedger::consumed_total() const noexcept {
  return consumed_[0] + consumed_[1] + consumed_[2] + consumed_[3];
}

double EnergyLedger::surplus() const noexcept {
  if (dead_) return 0.0;
  return std::max(0.0, initial_ - consumed_total());
}

bool EnergyLedger::charge(EnergyCategory category, double joules) {
  if (dead_ || joules <= 0.0) return false;
  const double available = surplus();
  auto& slot = consumed_[static_cast<std::size_t>(category)];
  if (joules >= available) {
    slot += available;
    dead_ = true;
    return true;
  }
  slot += joules;
  return false;
}

bool charge_packet(EnergyLedger& ledger, Direction direction, std::uint64_t bits,
                   double distance, const RadioEnergyParams& p) {
  if (bits == 0 || ledger.dead()) return false;
  const double b = static_cast<double>(bits);
  if (direction == Direction::Tx) {
    const double cost = p.duration_mode
                            ? p.tx_power_watts * b / p.channel_rate_bps
                            : b * tx_energy_per_bit(distance, p.e_elec, p.e_amp, p.path_loss_alpha);
    return ledger.charge(EnergyCategory::Tx, cost);
  }
  const double cost = p.duration_mode ? p.rx_power_watts * b / p.channel_rate_bps : b * p.e_elec;
  return ledger.charge(EnergyCategory::Rx, cost);
}

}  // namespace mwsn::phy
