#include "mwsn/clustering/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mwsn::clustering {

PrecinctGrid::PrecinctGrid(double field_side, std::uint32_t grid_dim)
    : side_(field_side), dim_(grid_dim) {
  if (grid_dim == 0) throw std::invalid_argument("precinct grid dimension must be >= 1");
  if (!(field_side > 0.0)) throw std::invalid_argument("field side must be positive");
  cell_ = field_side / grid_dim;
  precincts_.reserve(std::size_t{dim_} * dim_);
  for (std::uint32_t r = 0; r < dim_; ++r) {
    for (std::uint32_t c = 0; c < dim_; ++c) {
      Precinct p;
      p.coord = {r, c};
      p.x0 = c * cell_;
      p.y0 = r * cell_;
      p.side = cell_;
      precincts_.push_back(std::move(p));
    }
  }
}

PrecinctCoord PrecinctGrid::locate(Vec2 p) const {
  const auto cell_of = [this](double v) {
    const double k = std::floor(v / cell_);
    if (k <= 0.0) return std::uint32_t{0};
    return static_cast<std::uint32_t>(std::min<double>(k, dim_ - 1));
  };
  return {cell_of(p.y), cell_of(p.x)};
}

void PrecinctGrid::assign_members(std::span<const Vec2> positions, const std::vector<bool>& alive) {
  for (auto& p : precincts_) p.members.clear();
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (i < alive.size() && !alive[i]) continue;
    precincts_[index(locate(positions[i]))].members.push_back(static_cast<NodeId>(i));
  }
  for (auto& p : precincts_) {
    if (p.fusion_head &&
        !std::binary_search(p.members.begin(), p.members.end(), *p.fusion_head)) {
      p.fusion_head.reset();
    }
    std::erase_if(p.gateways, [&](NodeId g) {
      return !std::binary_search(p.members.begin(), p.members.end(), g);
    });
  }
}

PrecinctGrid build_precinct_grid(double field_side, std::uint32_t grid_dim) {
  return PrecinctGrid(field_side, grid_dim);
}

void identify_gateways(PrecinctGrid& grid, std::span<const Vec2> positions,
                       const phy::LinkModel& link) {
  // Membership lookup by node id.
  std::vector<std::size_t> owner(positions.size(), grid.size());
  for (std::size_t pi = 0; pi < grid.size(); ++pi) {
    for (NodeId m : grid.precincts()[pi].members) owner.at(m) = pi;
  }
  for (std::size_t pi = 0; pi < grid.size(); ++pi) {
    auto& p = grid.precincts()[pi];
    p.gateways.clear();
    for (NodeId m : p.members) {
      for (std::size_t j = 0; j < positions.size(); ++j) {
        if (owner[j] == grid.size() || owner[j] == pi) continue;
        if (phy::in_range(positions[m], positions[j], link)) {
          p.gateways.push_back(m);
          break;
        }
      }
    }
  }
}

double compute_vid(double surplus, std::size_t population, bool retired) {
  if (population == 0) throw std::invalid_argument("compute_vid: empty precinct");
  if (retired) return 0.0;
  return surplus / static_cast<double>(population);
}

double fusion_probability(NodeId candidate, std::span<const CandidateScore> scores,
                          const Thresholds& th) {
  if (scores.empty()) throw std::invalid_argument("fusion_probability: empty precinct");
  const auto self = std::find_if(scores.begin(), scores.end(),
                                 [&](const CandidateScore& s) { return s.node == candidate; });
  if (self == scores.end()) {
    throw std::invalid_argument("fusion_probability: candidate not in precinct");
  }
  const auto inverse_mobility = [](const CandidateScore& s) {
    return 1.0 / (s.mobility + kMobilityEpsilon);
  };

  double sum_e = 0.0, sum_r = 0.0, sum_m = 0.0;
  for (const auto& s : scores) {
    if (s.surplus > th.energy) sum_e += s.surplus;
    if (s.tx_range > th.range) sum_r += s.tx_range;
    if (s.mobility < th.mobility) sum_m += inverse_mobility(s);
  }
  double p = 0.0;
  if (self->surplus > th.energy) p += self->surplus / sum_e;
  if (self->tx_range > th.range) p += self->tx_range / sum_r;
  if (self->mobility < th.mobility) p += inverse_mobility(*self) / sum_m;
  return std::clamp(p / 3.0, 0.0, 1.0);
}

void score_precinct(std::span<CandidateScore> scores, const Thresholds& th) {
  std::vector<double> p(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    p[i] = fusion_probability(scores[i].node, scores, th);
  }
  for (std::size_t i = 0; i < scores.size(); ++i) scores[i].p_fusion = p[i];
}

namespace {

// True when a ranks strictly ahead of b.
bool better(const CandidateScore& a, const CandidateScore& b) {
  if (a.p_fusion != b.p_fusion) return a.p_fusion > b.p_fusion;
  if (a.vid != b.vid) return a.vid > b.vid;
  return a.node < b.node;
}

}  // namespace

NodeId elect_fusion_head(std::span<const CandidateScore> scores) {
  if (scores.empty()) throw std::invalid_argument("elect_fusion_head: empty precinct");
  return std::min_element(scores.begin(), scores.end(), better)->node;
}

Reelection reelection_check(NodeId head, std::span<const CandidateScore> scores,
                            double p_threshold) {
  const auto current = std::find_if(scores.begin(), scores.end(),
                                    [&](const CandidateScore& s) { return s.node == head; });
  if (current == scores.end()) {
    if (scores.empty()) return {std::nullopt, true};
    return {elect_fusion_head(scores), true};
  }
  if (current->p_fusion >= p_threshold || scores.size() == 1) return {};

  const CandidateScore* best = nullptr;
  for (const auto& s : scores) {
    if (s.node == head) continue;
    if (!best || better(s, *best)) best = &s;
  }
  return {best->node, true};
}

}  // namespace mwsn::clustering
