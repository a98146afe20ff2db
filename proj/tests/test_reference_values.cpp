#include <gtest/gtest.h>

#include "dersim/attacks.hpp"
#include "dersim/mca.hpp"
#include "dersim/plant.hpp"
#include "dersim/scenario.hpp"
#include "dersim/secondary_control.hpp"

using namespace dersim;

// Published testbed parameters and the worked values that follow from them.

TEST(ReferenceValues, DroopDefaults) {
  const DroopParams dp;
  EXPECT_EQ(dp.m_p, 9.4e-5);
  EXPECT_EQ(dp.n_q, 1.3e-3);
  DerState s;
  s.p_filt = 10000.0;
  s.q_filt = 5000.0;
  const auto r = DroopReferences(s, dp, 0.0, 0.0);
  EXPECT_NEAR(r.omega_star, dp.omega_nom - 0.94, 1e-12);
  EXPECT_NEAR(r.v_star[0], dp.v_nom - 6.5, 1e-12);
  EXPECT_NEAR(PackPsi(s, 0.0, dp).mp_p, 0.94, 1e-15);
}

TEST(ReferenceValues, ControllerArithmetic) {
  ScParams sc;  // 0.1 / 100, 0.1 / 10
  const auto f = FrequencyCorrection(0.1, 1.0, 1.0, sc, 1e-3, 0.0);
  EXPECT_NEAR(f.correction, 0.02, 1e-15);
  double integ = 0.0;
  PiOutput v;
  for (int k = 0; k < 1000; ++k) {
    v = VoltageCorrection(1.0, sc, 1e-3, integ);
    integ = v.integrator;
  }
  EXPECT_NEAR(v.correction, 10.1, 1e-9);
}

TEST(ReferenceValues, McaGainsAndLatency) {
  const McaParams p;
  EXPECT_EQ(p.g1, 0.3);
  EXPECT_EQ(p.g2, 0.5);
  EXPECT_EQ(Feedback({1.0, 1.0}, p.g1, p.g2), (Vec2{0.3, 0.5}));
  const Packet pkt{0, 1, {}, 0.2, 200};
  EXPECT_EQ(LatencyDueStep(pkt, 0.05, 1e-3), 250);
}

TEST(ReferenceValues, NineDerScenariosUseTheirTable) {
  for (const char* name : {"la-69", "la-dropout-69", "tsa-69", "reconfig-la-69"}) {
    SCOPED_TRACE(name);
    const auto cfg = LoadBuiltin(name);
    EXPECT_EQ(cfg.n_agents(), 9);
    EXPECT_EQ(cfg.plant.droop.m_p, 9.4e-5);
    EXPECT_EQ(cfg.plant.droop.n_q, 1.3e-3);
    EXPECT_EQ(cfg.plant.inner.kp_v, 50.0);
    EXPECT_EQ(cfg.plant.inner.ki_v, 100.0);
    EXPECT_EQ(cfg.plant.inner.kp_i, 0.2);
    EXPECT_EQ(cfg.plant.inner.ki_i, 1.0);
    EXPECT_EQ(cfg.sc.kp_omega, 0.1);
    EXPECT_EQ(cfg.sc.ki_omega, 100.0);
    EXPECT_EQ(cfg.sc.kp_v, 0.1);
    EXPECT_EQ(cfg.sc.ki_v, 10.0);
    EXPECT_EQ(cfg.mca.g1, 0.3);
    EXPECT_EQ(cfg.mca.g2, 0.5);
  }
}

TEST(ReferenceValues, FiveDerScenariosUseTheirTable) {
  for (const char* name :
       {"attack-free-k5", "fdia-balanced-47", "fdia-balanced-la-47", "fdia-unbalanced-47", "topology-la-47"}) {
    SCOPED_TRACE(name);
    const auto cfg = LoadBuiltin(name);
    EXPECT_EQ(cfg.n_agents(), 5);
    EXPECT_EQ(cfg.plant.inner.kp_v, 40.0);
    EXPECT_EQ(cfg.plant.inner.ki_v, 80.0);
    EXPECT_EQ(cfg.plant.inner.kp_i, 0.1);
    EXPECT_EQ(cfg.plant.inner.ki_i, 0.5);
    EXPECT_EQ(cfg.sc.kp_omega, 0.1);
    EXPECT_EQ(cfg.sc.ki_omega, 10.0);
    EXPECT_EQ(cfg.sc.kp_v, 0.1);
    EXPECT_EQ(cfg.sc.ki_v, 1.5);
  }
}

TEST(ReferenceValues, AttackScenariosUseFiftyMillisecondLatency) {
  for (const char* name : {"la-69", "la-dropout-69", "reconfig-la-69", "fdia-balanced-la-47", "topology-la-47"}) {
    SCOPED_TRACE(name);
    bool found = false;
    for (const auto& a : LoadBuiltin(name).attacks)
      if (a.kind == AttackKind::kLatency) {
        EXPECT_EQ(a.tau, 0.05);
        found = true;
      }
    EXPECT_TRUE(found);
  }
  for (const auto& a : LoadBuiltin("la-dropout-69").attacks) {
    if (a.kind == AttackKind::kDropout) {
      EXPECT_EQ(a.p, 0.1);
    }
  }
}

TEST(ReferenceValues, ChainTopologyDegrees) {
  EXPECT_EQ(Laplacian(CyberGraph::Chain(5)).d_in, (std::vector<double>{1, 2, 2, 2, 1}));
}
