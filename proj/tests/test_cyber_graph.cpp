#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dersim/cyber_graph.hpp"
#include "dersim/error.hpp"
#include "oracles.hpp"

using namespace dersim;

TEST(CyberGraph, BuildRejectsBadEdges) {
  EXPECT_THROW(CyberGraph::Build(3, {{0, 0, 1.0}}), ContractError);
  EXPECT_THROW(CyberGraph::Build(3, {{0, 3, 1.0}}), ContractError);
  EXPECT_THROW(CyberGraph::Build(3, {{0, 1, 0.0}}), ContractError);
  EXPECT_THROW(CyberGraph::Build(3, {{0, 1, -2.0}}), ContractError);
  EXPECT_THROW(CyberGraph::Build(0, {}), ContractError);
}

TEST(CyberGraph, UndirectedEdgesAreSymmetric) {
  const auto g = CyberGraph::Build(3, {{0, 1, 2.0}, {1, 2, 0.5}});
  EXPECT_EQ(g.weight(0, 1), 2.0);
  EXPECT_EQ(g.weight(1, 0), 2.0);
  EXPECT_EQ(g.weight(2, 1), 0.5);
  EXPECT_EQ(g.weight(0, 2), 0.0);
  EXPECT_EQ(g.Neighbors(1), (std::vector<int>{0, 2}));
}

TEST(CyberGraph, DirectedEdgeIsOneWay) {
  const auto g = CyberGraph::Build(2, {{0, 1, 1.0}}, true);
  EXPECT_TRUE(g.directed());
  EXPECT_EQ(g.weight(0, 1), 1.0);
  EXPECT_EQ(g.weight(1, 0), 0.0);
  EXPECT_THROW(MaxLaplacianEigenvalue(Laplacian(g)), UnsupportedError);
}

TEST(CyberGraph, PresetsAndConnectivity) {
  EXPECT_EQ(CyberGraph::Complete(4).Neighbors(2), (std::vector<int>{0, 1, 3}));
  EXPECT_EQ(CyberGraph::Chain(4).Neighbors(0), (std::vector<int>{1}));
  EXPECT_TRUE(CyberGraph::Chain(6).IsConnected());
  EXPECT_FALSE(CyberGraph::Build(4, {{0, 1, 1.0}, {2, 3, 1.0}}).IsConnected());
}

TEST(Laplacian, DegreesAndZeroRowSums) {
  const auto g = CyberGraph::Build(4, {{0, 1, 1.0}, {1, 2, 3.0}, {2, 3, 0.5}, {0, 3, 2.0}});
  const auto lv = Laplacian(g);
  EXPECT_EQ(lv.d_in, (std::vector<double>{3.0, 4.0, 3.5, 2.5}));
  for (int r = 0; r < 4; ++r) {
    double s = 0.0;
    for (int c = 0; c < 4; ++c) s += lv.laplacian(r, c);
    EXPECT_NEAR(s, 0.0, 1e-15);
  }
  EXPECT_EQ(lv.laplacian(1, 2), -3.0);
}

TEST(Laplacian, KnownSpectra) {
  // complete graph: n; path on two nodes: 2; star on n nodes: n
  EXPECT_NEAR(MaxLaplacianEigenvalue(Laplacian(CyberGraph::Complete(5))), 5.0, 1e-9);
  EXPECT_NEAR(MaxLaplacianEigenvalue(Laplacian(CyberGraph::Chain(2))), 2.0, 1e-9);
  std::vector<Edge> star;
  for (int i = 1; i < 6; ++i) star.push_back({0, i, 1.0});
  EXPECT_NEAR(MaxLaplacianEigenvalue(Laplacian(CyberGraph::Build(6, star))), 6.0, 1e-9);
  // path on n nodes: 2 - 2 cos(pi (n-1) / n)
  const double path7 = 2.0 - 2.0 * std::cos(std::numbers::pi * 6.0 / 7.0);
  EXPECT_NEAR(MaxLaplacianEigenvalue(Laplacian(CyberGraph::Chain(7))), path7, 1e-9);
}

TEST(Laplacian, SingleAgentHasZeroSpectrum) {
  EXPECT_EQ(MaxLaplacianEigenvalue(Laplacian(CyberGraph::Build(1, {}))), 0.0);
}

TEST(Laplacian, PowerIterationMatchesDenseSolverOnRandomGraphs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 11;
    const auto g = oracle::RandomConnectedGraph(n, rng);
    const double want = oracle::MaxEigenvalue(g);
    const double got = MaxLaplacianEigenvalue(Laplacian(g));
    EXPECT_NEAR(got, want, 1e-6 * want) << "n=" << n << " trial=" << trial;
  }
}

TEST(Laplacian, ScalingWeightsScalesLambda) {
  std::mt19937_64 rng(5);
  const auto g = oracle::RandomConnectedGraph(6, rng);
  const double l1 = MaxLaplacianEigenvalue(Laplacian(g));
  const double l3 = MaxLaplacianEigenvalue(Laplacian(g.Scaled(3.0)));
  EXPECT_NEAR(l3, 3.0 * l1, 1e-8 * l3);
}

TEST(DelayBound, CompleteAndPath) {
  const auto k5 = DelayStabilityBound(Laplacian(CyberGraph::Complete(5)));
  EXPECT_NEAR(k5.tau_max, std::numbers::pi / 10.0, 1e-10);
  EXPECT_FALSE(k5.disconnected);
  const auto p2 = DelayStabilityBound(Laplacian(CyberGraph::Chain(2)));
  EXPECT_NEAR(p2.tau_max, std::numbers::pi / 4.0, 1e-10);
}

TEST(DelayBound, FlagsDisconnectedGraphs) {
  const auto b = DelayStabilityBound(Laplacian(CyberGraph::Build(4, {{0, 1, 1.0}, {2, 3, 1.0}})));
  EXPECT_TRUE(b.disconnected);
  EXPECT_NEAR(b.lambda_max, 2.0, 1e-9);
}

TEST(TopologySchedule, LatestEntryWins) {
  TopologySchedule s(CyberGraph::Complete(3));
  s.Add(5.0, CyberGraph::Chain(3));
  EXPECT_EQ(s.GraphAt(0.0), CyberGraph::Complete(3));
  EXPECT_EQ(s.GraphAt(4.999), CyberGraph::Complete(3));
  EXPECT_EQ(s.GraphAt(5.0), CyberGraph::Chain(3));
  EXPECT_EQ(s.GraphAt(100.0), CyberGraph::Chain(3));
  EXPECT_THROW(s.GraphAt(-1.0), ContractError);
}

TEST(TopologySchedule, RejectsBadSwitches) {
  TopologySchedule s(CyberGraph::Complete(3));
  EXPECT_THROW(s.Add(0.0, CyberGraph::Chain(3)), ContractError);
  EXPECT_THROW(s.Add(1.0, CyberGraph::Chain(4)), ContractError);
}
