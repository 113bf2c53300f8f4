#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mwsn/clustering/clustering.hpp"
#include "mwsn/engine/rng.hpp"

namespace mwsn::clustering {
namespace {

const Thresholds kTh{1.0, 7.07, 12.5};

CandidateScore cand(NodeId id, double surplus, double range, double mobility, double vid = 0) {
  CandidateScore s;
  s.node = id;
  s.surplus = surplus;
  s.tx_range = range;
  s.mobility = mobility;
  s.vid = vid;
  return s;
}

TEST(Grid, Degenerate) {
  auto g = build_precinct_grid(25.0, 1);
  const std::vector<Vec2> pos{{0, 0}, {25, 25}, {12, 3}};
  g.assign_members(pos, {});
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.precincts()[0].members.size(), 3u);
  EXPECT_THROW(build_precinct_grid(25.0, 0), std::invalid_argument);
}

TEST(Grid, TilesField) {
  const auto g = build_precinct_grid(25.0, 5);
  ASSERT_EQ(g.size(), 25u);
  double area = 0.0;
  for (const auto& p : g.precincts()) {
    EXPECT_DOUBLE_EQ(p.side, 5.0);
    area += p.side * p.side;
  }
  EXPECT_DOUBLE_EQ(area, 625.0);
}

TEST(Grid, LocateUsesFloor) {
  const auto g = build_precinct_grid(25.0, 5);
  EXPECT_EQ(g.locate({5.0, 7.3}), (PrecinctCoord{1, 1}));
  EXPECT_EQ(g.locate({25.0, 25.0}), (PrecinctCoord{4, 4}));
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 p{rng.uniform(0, 25), rng.uniform(0, 25)};
    const auto c = g.locate(p);
    EXPECT_EQ(c.row, static_cast<std::uint32_t>(std::floor(p.y / 5.0)));
    EXPECT_EQ(c.col, static_cast<std::uint32_t>(std::floor(p.x / 5.0)));
  }
}

TEST(Grid, MembershipSkipsDeadAndClearsHeads) {
  auto g = build_precinct_grid(10.0, 2);
  const std::vector<Vec2> pos{{1, 1}, {2, 2}, {8, 8}};
  g.assign_members(pos, {});
  g.at({0, 0}).fusion_head = 1;
  g.assign_members(pos, {true, false, true});
  EXPECT_EQ(g.at({0, 0}).members, std::vector<NodeId>{0});
  EXPECT_FALSE(g.at({0, 0}).fusion_head.has_value());
}

TEST(Gateways, Rules) {
  const phy::LinkModel link{3.0, 2.0};
  {
    auto g = build_precinct_grid(10.0, 1);
    const std::vector<Vec2> pos{{1, 1}, {2, 2}};
    g.assign_members(pos, {});
    identify_gateways(g, pos, link);
    EXPECT_TRUE(g.precincts()[0].gateways.empty());
  }
  {
    auto g = build_precinct_grid(10.0, 2);
    // 0 and 1 straddle the x = 5 border; 2 only hears its own precinct mate 0
    const std::vector<Vec2> pos{{4.5, 1}, {5.5, 1}, {2, 1}};
    g.assign_members(pos, {});
    identify_gateways(g, pos, link);
    EXPECT_EQ(g.at({0, 0}).gateways, std::vector<NodeId>{0});
    EXPECT_EQ(g.at({0, 1}).gateways, std::vector<NodeId>{1});
  }
}

TEST(Vid, Arithmetic) {
  EXPECT_DOUBLE_EQ(compute_vid(5.0, 10), 0.5);
  EXPECT_EQ(compute_vid(0.0, 3), 0.0);
  EXPECT_EQ(compute_vid(3.0, 2, true), 0.0);
  EXPECT_THROW(compute_vid(1.0, 0), std::invalid_argument);
}

TEST(FusionProbability, Extremes) {
  const std::vector<CandidateScore> one{cand(0, 4.0, 250, 1.0)};
  EXPECT_DOUBLE_EQ(fusion_probability(0, one, kTh), 1.0);
  const std::vector<CandidateScore> two{cand(0, 4.0, 250, 1.0), cand(1, 0.5, 5.0, 20.0)};
  EXPECT_EQ(fusion_probability(1, two, kTh), 0.0);
  const std::vector<CandidateScore> twins{cand(0, 4.0, 250, 3.0), cand(1, 4.0, 250, 3.0)};
  EXPECT_DOUBLE_EQ(fusion_probability(0, twins, kTh), 0.5);
  EXPECT_DOUBLE_EQ(fusion_probability(1, twins, kTh), 0.5);
  EXPECT_THROW(fusion_probability(0, std::vector<CandidateScore>{}, kTh), std::invalid_argument);
  EXPECT_THROW(fusion_probability(7, one, kTh), std::invalid_argument);
}

TEST(FusionProbability, MonotoneInSurplus) {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<CandidateScore> s;
    const auto n = rng.uniform_int(2, 12);
    for (NodeId i = 0; i < n; ++i) {
      s.push_back(cand(i, rng.uniform(1.5, 5), rng.uniform(0, 20), rng.uniform(0, 25)));
    }
    const double before = fusion_probability(0, s, kTh);
    s[0].surplus += rng.uniform(0.0, 3.0);
    ASSERT_GE(fusion_probability(0, s, kTh), before - 1e-15);
  }
}

TEST(FusionProbability, ScaleInvariantElection) {
  Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<CandidateScore> s;
    const auto n = rng.uniform_int(2, 12);
    for (NodeId i = 0; i < n; ++i) {
      const double e = rng.uniform(0, 5);
      s.push_back(cand(i, e, rng.uniform(0, 20), rng.uniform(0, 25), e / n));
    }
    auto scaled = s;
    const double k = rng.uniform(0.1, 10.0);
    for (auto& c : scaled) {
      c.surplus *= k;
      c.vid *= k;
    }
    Thresholds th = kTh;
    score_precinct(s, th);
    th.energy *= k;
    score_precinct(scaled, th);
    ASSERT_EQ(elect_fusion_head(s), elect_fusion_head(scaled));
  }
}

TEST(Election, ArgmaxAndTieBreaks) {
  auto with_p = [](NodeId id, double p, double vid) {
    CandidateScore s;
    s.node = id;
    s.p_fusion = p;
    s.vid = vid;
    return s;
  };
  EXPECT_EQ(elect_fusion_head(std::vector{with_p(0, 0.8, 0), with_p(1, 0.3, 0), with_p(2, 0.3, 0)}),
            0u);
  EXPECT_EQ(elect_fusion_head(std::vector{with_p(0, 0.4, 0.2), with_p(1, 0.4, 0.5)}), 1u);
  EXPECT_EQ(elect_fusion_head(std::vector{with_p(0, 0, 0.1), with_p(1, 0, 0.9), with_p(2, 0, 0.3)}),
            1u);
  EXPECT_EQ(elect_fusion_head(std::vector{with_p(3, 0.5, 0.5), with_p(2, 0.5, 0.5)}), 2u);
}

TEST(Reelection, ThresholdRule) {
  auto with_p = [](NodeId id, double p) {
    CandidateScore s;
    s.node = id;
    s.p_fusion = p;
    return s;
  };
  EXPECT_FALSE(reelection_check(0, std::vector{with_p(0, 0.6), with_p(1, 0.4)}, 0.5).new_head);
  const auto r = reelection_check(0, std::vector{with_p(0, 0.4), with_p(1, 0.55)}, 0.5);
  ASSERT_TRUE(r.new_head);
  EXPECT_EQ(*r.new_head, 1u);
  EXPECT_TRUE(r.head_retired);
  // head gone from the precinct: immediate replacement
  const auto gone = reelection_check(5, std::vector{with_p(0, 0.1), with_p(1, 0.3)}, 0.5);
  ASSERT_TRUE(gone.new_head);
  EXPECT_EQ(*gone.new_head, 1u);
  // lone head keeps the role
  EXPECT_FALSE(reelection_check(0, std::vector{with_p(0, 0.1)}, 0.5).new_head);
}

}  // namespace
}  // namespace mwsn::clustering
