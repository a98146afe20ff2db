#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dersim/metrics.hpp"
#include "dersim/scenario.hpp"
#include "dersim/trace.hpp"

namespace dersim {

inline constexpr int kSummarySchemaVersion = 1;

// Shortest text that parses back to the same double (17 significant digits).
std::string FormatDouble(double x);

// Wide trace: step,t then, per agent j, the columns
// omega_j,p_filt_j,q_filt_j,mp_p_j,nq_q_j,v_d_j,zeta_p_j,zeta_q_j,zeta_pf_j,
// zeta_qf_j,d_omega_j,d_v_j.
std::vector<std::string> TraceCsvHeader(int n_agents);
void WriteTraceCsv(const Trace& trace, std::ostream& out);
void WriteTraceCsv(const Trace& trace, const std::filesystem::path& path);
// Reads a wide trace back. MCA columns are not part of this file.
Trace ReadTraceCsv(std::istream& in, double omega_nom = 0.0);
Trace ReadTraceCsv(const std::filesystem::path& path, double omega_nom = 0.0);

// Long MCA trace: t,agent,triggered,rho_p,rho_q,recon_p,recon_q,freshness,
// relevance_p,relevance_q.
void WriteMcaCsv(const Trace& trace, std::ostream& out);
void WriteMcaCsv(const Trace& trace, const std::filesystem::path& path);

// step,t,src,dst,omega,mp_p,nq_q,stamp,dropped
void WritePacketCsv(const std::vector<PacketLogEntry>& log, std::ostream& out);
void WritePacketCsv(const std::vector<PacketLogEntry>& log, const std::filesystem::path& path);

// x,y
void WritePortraitCsv(const PhasePortrait& pp, std::ostream& out);

struct RunSummary {
  std::string scenario;
  bool mca_enabled = false;
  std::uint64_t seed = 0;
  ConvergenceReport report;
  long trigger_count = 0;
  long clock_skew_count = 0;
  PipelineStats packets;
  long steps = 0;
  std::string divergence;  // empty when the run finished
};

RunSummary Summarize(const ScenarioConfig& cfg, const Trace& trace, const ConvergenceReport& r);
std::string SummaryJson(const RunSummary& s);
void WriteSummaryJson(const RunSummary& s, const std::filesystem::path& path);
RunSummary ParseSummaryJson(const std::string& text);

}  // namespace dersim
