#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dersim/attacks.hpp"

namespace dersim {

// Per-agent values at the start of a step, plus the control quantities
// computed from them during that step.
struct AgentSample {
  double omega = 0.0;
  double p_filt = 0.0;
  double q_filt = 0.0;
  double mp_p = 0.0;
  double nq_q = 0.0;
  double v_d = 0.0;
  double zeta_p = 0.0;
  double zeta_q = 0.0;
  double zeta_pf = 0.0;
  double zeta_qf = 0.0;
  double d_omega = 0.0;
  double d_v = 0.0;
  // VC-loop error fed to the MCA this step; kept in memory only.
  double vc_err_d = 0.0;
  double vc_err_q = 0.0;
  // MCA
  bool triggered = false;
  double rho_p = 0.0;
  double rho_q = 0.0;
  double recon_p = 0.0;
  double recon_q = 0.0;
  double freshness = 0.0;
  double relevance_p = 0.0;
  double relevance_q = 0.0;

  bool operator==(const AgentSample&) const = default;
};

struct TraceRow {
  long step = 0;
  double t = 0.0;
  std::vector<AgentSample> agents;

  bool operator==(const TraceRow&) const = default;
};

struct Divergence {
  long step = 0;
  int agent = 0;
  std::string what;
};

struct Trace {
  int n_agents = 0;
  double dt = 0.0;
  double omega_nom = 0.0;
  std::vector<TraceRow> rows;
  long trigger_count = 0;
  long clock_skew_count = 0;
  PipelineStats packets;
  std::vector<PacketLogEntry> packet_log;
  std::optional<Divergence> divergence;

  bool empty() const { return rows.empty(); }
};

}  // namespace dersim
