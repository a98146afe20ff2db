#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <sstream>

#include "dersim/emit.hpp"
#include "dersim/error.hpp"

using namespace dersim;

namespace {

Trace RandomTrace(std::uint64_t seed, int n_agents, long rows) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  Trace tr;
  tr.n_agents = n_agents;
  tr.dt = 1e-3;
  for (long k = 0; k < rows; ++k) {
    TraceRow row{k, k * 1e-3, std::vector<AgentSample>(n_agents)};
    for (auto& a : row.agents) {
      a.omega = u(rng) * 1e-7;
      a.p_filt = u(rng);
      a.q_filt = u(rng);
      a.mp_p = u(rng) / 3.0;
      a.nq_q = u(rng) / 7.0;
      a.v_d = u(rng);
      a.zeta_p = u(rng) * 1e-300;
      a.zeta_q = u(rng);
      a.zeta_pf = u(rng);
      a.zeta_qf = u(rng);
      a.d_omega = u(rng);
      a.d_v = u(rng) * 1e200;
    }
    tr.rows.push_back(std::move(row));
  }
  return tr;
}

}  // namespace

TEST(Emit, FormatDoubleRoundTrips) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    double x;
    const std::uint64_t bits = rng();
    std::memcpy(&x, &bits, sizeof x);
    if (!std::isfinite(x)) continue;
    EXPECT_EQ(std::strtod(FormatDouble(x).c_str(), nullptr), x);
  }
}

TEST(Emit, HeaderLayout) {
  const auto h = TraceCsvHeader(2);
  ASSERT_EQ(h.size(), 2u + 2 * 12);
  EXPECT_EQ(h[0], "step");
  EXPECT_EQ(h[1], "t");
  EXPECT_EQ(h[2], "omega_0");
  EXPECT_EQ(h[13], "d_v_0");
  EXPECT_EQ(h[14], "omega_1");
}

TEST(Emit, EmptyTraceIsHeaderOnly) {
  Trace tr;
  tr.n_agents = 1;
  std::ostringstream out;
  WriteTraceCsv(tr, out);
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
  std::ostringstream mca;
  WriteMcaCsv(tr, mca);
  EXPECT_EQ(mca.str(), "t,agent,triggered,rho_p,rho_q,recon_p,recon_q,freshness,relevance_p,relevance_q\n");
}

TEST(Emit, TraceCsvRoundTripIsBitExact) {
  const Trace tr = RandomTrace(2, 3, 50);
  std::stringstream io;
  WriteTraceCsv(tr, io);
  const Trace back = ReadTraceCsv(io);
  ASSERT_EQ(back.rows.size(), tr.rows.size());
  EXPECT_EQ(back.n_agents, 3);
  for (std::size_t k = 0; k < tr.rows.size(); ++k) {
    EXPECT_EQ(back.rows[k].t, tr.rows[k].t);
    for (int j = 0; j < 3; ++j) {
      const auto& a = tr.rows[k].agents[j];
      const auto& b = back.rows[k].agents[j];
      EXPECT_EQ(a.omega, b.omega);
      EXPECT_EQ(a.mp_p, b.mp_p);
      EXPECT_EQ(a.zeta_p, b.zeta_p);
      EXPECT_EQ(a.d_v, b.d_v);
    }
  }
}

TEST(Emit, ReadRejectsForeignCsv) {
  std::istringstream bad("a,b,c\n1,2,3\n");
  EXPECT_THROW(ReadTraceCsv(bad), Error);
}

TEST(Emit, PacketCsv) {
  std::vector<PacketLogEntry> log{{5, 0.005, 0, 1, {1.0, 2.0, 3.0}, 0.005, true}};
  std::ostringstream out;
  WritePacketCsv(log, out);
  EXPECT_EQ(out.str(), "step,t,src,dst,omega,mp_p,nq_q,stamp,dropped\n5,0.0050000000000000001,0,1,1,2,3,0.0050000000000000001,1\n");
}

TEST(Emit, SummaryJsonRoundTrip) {
  RunSummary s;
  s.scenario = "x";
  s.mca_enabled = true;
  s.seed = 42;
  s.report.converged = true;
  s.report.conv_time = 1.0 / 3.0;
  s.report.freq_error_final = 1e-7;
  s.report.p_share_spread_final = 0.1;
  s.report.q_share_spread_final = 0.2;
  s.trigger_count = 17;
  s.packets.sent = 100;
  s.packets.dropped = 9;
  s.steps = 1000;
  const auto back = ParseSummaryJson(SummaryJson(s));
  EXPECT_EQ(back.scenario, "x");
  EXPECT_EQ(back.seed, 42u);
  EXPECT_EQ(back.report.conv_time, 1.0 / 3.0);
  EXPECT_EQ(back.report.freq_error_final, 1e-7);
  EXPECT_EQ(back.trigger_count, 17);
  EXPECT_EQ(back.packets.dropped, 9);
  EXPECT_TRUE(back.divergence.empty());
}

TEST(Emit, SummaryWritesNullForMissingTime) {
  RunSummary s;
  s.divergence = "step 3, agent 0: boom";
  const std::string text = SummaryJson(s);
  EXPECT_NE(text.find("\"conv_time\": null"), std::string::npos);
  EXPECT_LT(text.find("schema_version"), text.find("scenario"));
  const auto back = ParseSummaryJson(text);
  EXPECT_TRUE(std::isnan(back.report.conv_time));
  EXPECT_EQ(back.divergence, s.divergence);
}
