#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dersim/engine.hpp"
#include "dersim/error.hpp"
#include "dersim/metrics.hpp"

using namespace dersim;

namespace {

ScenarioConfig Small(double t_end = 2.0) {
  auto cfg = ParseScenario(R"({
    "name": "small", "seed": 3,
    "graph": {"n": 3, "preset": "complete"},
    "network": {"lines": [[0, 1, 2.0], [1, 2, 2.0]]},
    "loads": [{"p": 8000, "q": 3000, "steps": [{"t": 0.5, "p": 12000, "q": 3000}]},
              {"p": 6000, "q": 2000}, {"p": 7000, "q": 2500}],
    "inner": {"kp_v": 40, "ki_v": 80},
    "sc": {"kp_omega": 0.1, "ki_omega": 10, "kp_v": 0.1, "ki_v": 1.5},
    "metrics": {"disturbance_t": 0.5}
  })");
  cfg.t_end = t_end;
  return cfg;
}

void ExpectSameRows(const Trace& a, const Trace& b) {
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    for (std::size_t j = 0; j < a.rows[i].agents.size(); ++j) {
      const auto& x = a.rows[i].agents[j];
      const auto& y = b.rows[i].agents[j];
      ASSERT_EQ(x.omega, y.omega) << "row " << i;
      ASSERT_EQ(x.mp_p, y.mp_p);
      ASSERT_EQ(x.nq_q, y.nq_q);
      ASSERT_EQ(x.v_d, y.v_d);
      ASSERT_EQ(x.d_omega, y.d_omega);
      ASSERT_EQ(x.d_v, y.d_v);
    }
  }
}

}  // namespace

TEST(Engine, RowCountMatchesHorizon) {
  auto cfg = Small();
  cfg.t_end = 0.01;
  const auto tr = Simulate(cfg);
  ASSERT_EQ(tr.rows.size(), 10u);
  EXPECT_EQ(tr.rows.front().step, 0);
  EXPECT_EQ(tr.rows.back().t, 9 * cfg.dt);
  EXPECT_EQ(tr.n_agents, 3);
}

TEST(Engine, FirstRowIsInitialState) {
  const auto cfg = Small(0.01);
  const auto tr = Simulate(cfg);
  for (const auto& a : tr.rows.front().agents) {
    EXPECT_EQ(a.omega, cfg.plant.droop.omega_nom);
    EXPECT_EQ(a.v_d, cfg.plant.droop.v_nom);
    EXPECT_EQ(a.p_filt, 0.0);
  }
}

TEST(Engine, DeterministicForSameSeed) {
  auto cfg = Small();
  AttackSpec d;
  d.kind = AttackKind::kDropout;
  d.p = 0.2;
  cfg.attacks = {d};
  cfg.mca.enabled = true;
  const auto a = Simulate(cfg);
  const auto b = Simulate(cfg);
  EXPECT_EQ(a.rows, b.rows);
  EXPECT_EQ(a.packets.dropped, b.packets.dropped);
  cfg.seed = 4;
  EXPECT_NE(Simulate(cfg).packets.dropped, a.packets.dropped);
}

TEST(Engine, ZeroGainMcaMatchesDisabled) {
  auto cfg = Small();
  const auto off = Simulate(cfg);
  cfg.mca.enabled = true;
  cfg.mca.g1 = cfg.mca.g2 = 0.0;
  const auto on = Simulate(cfg);
  ExpectSameRows(off, on);
  EXPECT_GT(on.trigger_count, 0);
}

TEST(Engine, RestoresFrequencyAfterLoadStep) {
  const auto cfg = Small(4.0);
  const auto tr = Simulate(cfg);
  const auto r = AssessConvergence(tr, cfg.metrics);
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.freq_error_final, 1e-4);
  EXPECT_LT(r.p_share_spread_final, 1e-3);
}

TEST(Engine, ConsensusSeesNoDelayWithoutAttacks) {
  // With a complete graph and direct delivery, zeta is computed from the
  // neighbours' start-of-step values.
  const auto cfg = Small(0.8);
  const auto tr = Simulate(cfg);
  const auto& row = tr.rows[700];
  const auto& a = row.agents;
  const double c = cfg.sc.c;
  for (int j = 0; j < 3; ++j) {
    double want = 0.0;
    for (int m = 0; m < 3; ++m)
      if (m != j) want += (a[m].omega - a[j].omega) + (a[m].mp_p - a[j].mp_p);
    EXPECT_NEAR(a[j].zeta_p, c * want, 1e-12);
  }
}

TEST(Engine, LatencyOpensGapAtOnset) {
  auto cfg = Small(1.0);
  AttackSpec l;
  l.kind = AttackKind::kLatency;
  l.tau = 0.05;
  l.start = 0.5;
  cfg.attacks = {l};
  const auto tr = Simulate(cfg);
  // packets sent from 0.5 s arrive 50 steps later; nothing arrives in between
  EXPECT_NE(tr.rows[499].agents[0].zeta_p, 0.0);
  for (long k = 500; k < 550; ++k) EXPECT_EQ(tr.rows[k].agents[0].zeta_p, 0.0) << k;
  EXPECT_NE(tr.rows[551].agents[0].zeta_p, 0.0);
}

TEST(Engine, DivergenceIsReportedOrThrown) {
  auto cfg = Small(3.0);
  cfg.sc.c = 200.0;
  AttackSpec l;
  l.kind = AttackKind::kLatency;
  l.tau = 0.05;
  cfg.attacks = {l};
  const auto tr = Simulate(cfg);
  ASSERT_TRUE(tr.divergence);
  EXPECT_LT(tr.rows.size(), 3000u);
  EXPECT_THROW(RunScenario(cfg), DivergenceError);
  EXPECT_TRUE(AssessConvergence(tr, cfg.metrics).diverged);
}

TEST(Engine, NetworkSwitchChangesFlows) {
  auto cfg = Small(1.0);
  const auto base = Simulate(cfg);
  NetworkSwitch sw;
  sw.t = 0.8;
  sw.susceptance = cfg.plant.network.susceptance;
  sw.susceptance(0, 1) = sw.susceptance(1, 0) = 0.5;
  cfg.network_schedule = {sw};
  const auto tr = Simulate(cfg);
  // the flows integrated into row k use the lines in force at t_k
  EXPECT_EQ(tr.rows[799].agents[0].p_filt, base.rows[799].agents[0].p_filt);
  EXPECT_NE(tr.rows[800].agents[0].p_filt, base.rows[800].agents[0].p_filt);
}

TEST(Engine, WarmupStartsFromSettledState) {
  auto cfg = Small(0.2);
  cfg.warmup = 3.0;
  const auto tr = Simulate(cfg);
  EXPECT_EQ(tr.rows.size(), 200u);
  // settled: share spread already small before the load step
  for (const auto& a : tr.rows.front().agents) EXPECT_GT(a.p_filt, 5000.0);
  EXPECT_LT(std::abs(tr.rows.front().agents[0].omega - cfg.plant.droop.omega_nom), 1e-3);
}

TEST(AbstractConsensus, ClosedFormWithoutDelay) {
  // two agents, unit edge: the difference decays as (1 - 2 dt)^k
  auto cfg = ParseScenario(R"({"mode": "abstract", "dt": 0.001, "t_end": 1.0,
    "graph": {"n": 2, "preset": "chain"},
    "abstract": {"tau": 0.0, "initial": [[1, 2, 0], [-1, 0, 0]]}})");
  const auto tr = Simulate(cfg);
  for (long k : {0L, 10L, 500L, 999L}) {
    const auto& a = tr.rows[k].agents;
    EXPECT_NEAR(a[0].omega - a[1].omega, 2.0 * std::pow(1.0 - 2e-3, k), 1e-12);
    EXPECT_NEAR(a[0].mp_p + a[1].mp_p, 2.0, 1e-12);  // average preserved
  }
}

TEST(AbstractConsensus, BoundarySeparatesOutcomes) {
  auto cfg = LoadBuiltin("abstract-k5");
  const double bound = std::numbers::pi / 10.0;
  const auto pts = SweepDelay(cfg, {0.5 * bound, 1.5 * bound});
  EXPECT_TRUE(pts[0].converged);
  EXPECT_FALSE(pts[1].converged);
  cfg.mode = ScenarioMode::kPlant;
  EXPECT_THROW(RunAbstractConsensus(cfg), Error);
}

TEST(SweepDelay, PlantModeAddsLatency) {
  const auto cfg = Small(2.0);
  const auto pts = SweepDelay(cfg, {0.0, 0.02});
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_TRUE(pts[0].converged);
  EXPECT_EQ(pts[1].tau, 0.02);
}
