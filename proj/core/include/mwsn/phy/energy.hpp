#pragma once

#include <array>
#include <cstdint>

namespace mwsn::phy {

enum class EnergyCategory : std::uint8_t { Tx = 0, Rx, Sense, Idle };
enum class Direction : std::uint8_t { Tx, Rx };

/// Energy to push one bit over `distance`: e_elec + e_amp * distance^alpha.
/// Throws std::invalid_argument for a negative distance.
double tx_energy_per_bit(double distance, double e_elec, double e_amp, double alpha);

/// Uniformed mean power index w_i = [e_s + e_g*r_i + e_r*r_j + r_i*e_ij] / E_i.
/// A comparison index in 1/s, never subtracted from a battery. `e_g_per_bit`
/// is the sensing energy per generated bit (see sensing_energy_per_bit).
/// Throws std::invalid_argument if initial_energy <= 0 or any input is negative.
double mean_power_index(double e_s, double e_g_per_bit, double e_r, double e_ij, double r_i,
                        double r_j, double initial_energy);

/// Sensing power e_g (W) spread over a generation rate (bits/s) gives J/bit.
inline double sensing_energy_per_bit(double e_g_watts, double generation_rate_bps) {
  return e_g_watts / generation_rate_bps;
}

/// Battery bookkeeping by category. The surplus is always derived as
/// initial - sum(consumed), so the conservation identity holds up to a single
/// rounding. Once the surplus reaches zero the node is dead for good.
class EnergyLedger {
 public:
  EnergyLedger() = default;
  explicit EnergyLedger(double initial);

  double initial() const noexcept { return initial_; }
  double consumed(EnergyCategory c) const noexcept {
    return consumed_[static_cast<std::size_t>(c)];
  }
  double consumed_total() const noexcept;
  double surplus() const noexcept;
  bool dead() const noexcept { return dead_; }

  /// Deducts `joules` (clamped to the remaining surplus). Returns true when
  /// this charge exhausted the battery. No-op on a dead ledger.
  bool charge(EnergyCategory category, double joules);

  friend bool operator==(const EnergyLedger&, const EnergyLedger&) = default;

 private:
  double initial_ = 0.0;
  std::array<double, 4> consumed_{};
  bool dead_ = false;
};

struct RadioEnergyParams {
  double e_elec = 50e-9;
  double e_amp = 100e-12;
  double path_loss_alpha = 2.0;
  bool duration_mode = false;    // charge tx/rx power * airtime instead of per bit
  double tx_power_watts = 0.66;
  double rx_power_watts = 0.395;
  double channel_rate_bps = 2e6;
};

/// Charges a packet transmission or reception. Tx costs
/// bits * tx_energy_per_bit(distance); Rx costs bits * e_elec. Returns true
/// when the node died because of this charge.
bool charge_packet(EnergyLedger& ledger, Direction direction, std::uint64_t bits,
                   double distance, const RadioEnergyParams& params);

}  // namespace mwsn::phy
