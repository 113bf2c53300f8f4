#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mwsn/phy/radio.hpp"
#include "mwsn/types.hpp"

namespace mwsn::clustering {

/// One square zone of the field acting as a cluster.
struct Precinct {
  PrecinctCoord coord;
  double x0 = 0.0;
  double y0 = 0.0;
  double side = 0.0;
  std::vector<NodeId> members;   // ascending
  std::optional<NodeId> fusion_head;
  std::vector<NodeId> gateways;  // ascending
};

/// grid_dim x grid_dim congruent squares tiling [0, field_side]^2, row-major.
class PrecinctGrid {
 public:
  /// Throws std::invalid_argument when grid_dim == 0 or field_side <= 0.
  PrecinctGrid(double field_side, std::uint32_t grid_dim);

  std::uint32_t dim() const noexcept { return dim_; }
  double cell_side() const noexcept { return cell_; }
  std::size_t size() const noexcept { return precincts_.size(); }

  /// Half-open cells [k*cell, (k+1)*cell); the far field edge belongs to the
  /// last cell. Row follows y, column follows x.
  PrecinctCoord locate(Vec2 p) const;
  std::size_t index(PrecinctCoord c) const { return std::size_t{c.row} * dim_ + c.col; }

  std::vector<Precinct>& precincts() noexcept { return precincts_; }
  const std::vector<Precinct>& precincts() const noexcept { return precincts_; }
  Precinct& at(PrecinctCoord c) { return precincts_.at(index(c)); }
  const Precinct& at(PrecinctCoord c) const { return precincts_.at(index(c)); }

  /// Rebuilds member lists from positions; nodes with alive[i] == false are
  /// left out (missing entries count as alive). Heads that are no longer members are cleared.
  void assign_members(std::span<const Vec2> positions, const std::vector<bool>& alive);

 private:
  double side_;
  std::uint32_t dim_;
  double cell_;
  std::vector<Precinct> precincts_;
};

PrecinctGrid build_precinct_grid(double field_side, std::uint32_t grid_dim);

/// Marks as gateway every member with at least one in-range node that is a
/// member of a different precinct.
void identify_gateways(PrecinctGrid& grid, std::span<const Vec2> positions,
                       const phy::LinkModel& link);

/// Virtual id: surplus / precinct population; forced to zero for a retired
/// head. Throws std::invalid_argument when population == 0.
double compute_vid(double surplus, std::size_t population, bool retired = false);

struct Thresholds {
  double energy = 1.0;    // E_th, J
  double range = 7.07;    // R_th, m
  double mobility = 12.5; // M_th, m/s
};

struct CandidateScore {
  NodeId node = kNoNode;
  double vid = 0.0;
  double surplus = 0.0;
  double tx_range = 0.0;
  double mobility = 0.0;
  double p_fusion = 0.0;
};

inline constexpr double kMobilityEpsilon = 1e-6;

/// Fusion-head probability in [0, 1]:
///   (1/3) * [ 1{E > E_th} * share_E + 1{R > R_th} * share_R + 1{M < M_th} * share_M ]
/// where each share is the candidate's fraction among the members passing the
/// same threshold (surplus, range, and inverse mobility respectively).
/// Throws std::invalid_argument for an empty precinct or unknown candidate.
double fusion_probability(NodeId candidate, std::span<const CandidateScore> scores,
                          const Thresholds& thresholds);

/// Fills p_fusion for every entry.
void score_precinct(std::span<CandidateScore> scores, const Thresholds& thresholds);

/// Highest p_fusion wins; ties go to the higher VID, then the lower id. When
/// every probability is zero this reduces to the highest-VID member.
/// Throws std::invalid_argument on an empty span.
NodeId elect_fusion_head(std::span<const CandidateScore> scores);

struct Reelection {
  std::optional<NodeId> new_head;  // set when the head changes
  bool head_retired = false;       // old head must zero its VID
};

/// Periodic check. A head missing from `scores` (dead or moved away) is
/// replaced by a fresh election; a head whose p_fusion < p_threshold hands
/// over to the best non-head member. A lone head stays put.
Reelection reelection_check(NodeId head, std::span<const CandidateScore> scores,
                            double p_threshold);

}  // namespace mwsn::clustering
