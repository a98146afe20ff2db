#include "dersim/emit.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dersim/error.hpp"

namespace dersim {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kAgentColumns[] = {"omega",  "p_filt", "q_filt",  "mp_p",
                                         "nq_q",   "v_d",    "zeta_p",  "zeta_q",
                                         "zeta_pf", "zeta_qf", "d_omega", "d_v"};
constexpr int kAgentColumnCount = 12;

double* Column(AgentSample& a, int c) {
  double* cols[] = {&a.omega,  &a.p_filt, &a.q_filt,  &a.mp_p,    &a.nq_q,    &a.v_d,
                    &a.zeta_p, &a.zeta_q, &a.zeta_pf, &a.zeta_qf, &a.d_omega, &a.d_v};
  return cols[c];
}

std::ofstream OpenOut(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  return out;
}

void Finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError(path.string(), "write failed");
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double ParseDouble(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw Error("not a number in CSV: '" + s + "'");
  return v;
}

ordered_json NumberOrNull(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(); }

double NumberOrNan(const ordered_json& j) {
  return j.is_number() ? j.get<double>() : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::string FormatDouble(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> TraceCsvHeader(int n_agents) {
  std::vector<std::string> h{"step", "t"};
  for (int j = 0; j < n_agents; ++j)
    for (const char* c : kAgentColumns) h.push_back(std::string(c) + "_" + std::to_string(j));
  return h;
}

void WriteTraceCsv(const Trace& trace, std::ostream& out) {
  const auto header = TraceCsvHeader(trace.n_agents);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : trace.rows) {
    out << row.step << ',' << FormatDouble(row.t);
    for (const auto& a : row.agents) {
      AgentSample copy = a;
      for (int c = 0; c < kAgentColumnCount; ++c) out << ',' << FormatDouble(*Column(copy, c));
    }
    out << '\n';
  }
}

void WriteTraceCsv(const Trace& trace, const std::filesystem::path& path) {
  auto out = OpenOut(path);
  WriteTraceCsv(trace, out);
  Finish(out, path);
}

Trace ReadTraceCsv(std::istream& in, double omega_nom) {
  Trace trace;
  trace.omega_nom = omega_nom;
  std::string line;
  if (!std::getline(in, line)) throw Error("trace CSV has no header");
  const auto header = SplitCsv(line);
  if (header.size() < 2 || (header.size() - 2) % kAgentColumnCount != 0 || header[0] != "step") {
    throw Error("unrecognised trace CSV header");
  }
  trace.n_agents = static_cast<int>((header.size() - 2) / kAgentColumnCount);
  if (TraceCsvHeader(trace.n_agents) != header) throw Error("unrecognised trace CSV header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = SplitCsv(line);
    if (cells.size() != header.size()) throw Error("trace CSV row has wrong column count");
    TraceRow row;
    row.step = std::stol(cells[0]);
    row.t = ParseDouble(cells[1]);
    row.agents.resize(static_cast<std::size_t>(trace.n_agents));
    std::size_t k = 2;
    for (auto& a : row.agents)
      for (int c = 0; c < kAgentColumnCount; ++c) *Column(a, c) = ParseDouble(cells[k++]);
    trace.rows.push_back(std::move(row));
  }
  if (trace.rows.size() >= 2) trace.dt = trace.rows[1].t - trace.rows[0].t;
  return trace;
}

Trace ReadTraceCsv(const std::filesystem::path& path, double omega_nom) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  try {
    return ReadTraceCsv(in, omega_nom);
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    throw IoError(path.string(), e.what());
  }
}

void WriteMcaCsv(const Trace& trace, std::ostream& out) {
  out << "t,agent,triggered,rho_p,rho_q,recon_p,recon_q,freshness,relevance_p,relevance_q\n";
  for (const auto& row : trace.rows) {
    for (std::size_t j = 0; j < row.agents.size(); ++j) {
      const auto& a = row.agents[j];
      out << FormatDouble(row.t) << ',' << j << ',' << (a.triggered ? 1 : 0) << ','
          << FormatDouble(a.rho_p) << ',' << FormatDouble(a.rho_q) << ','
          << FormatDouble(a.recon_p) << ',' << FormatDouble(a.recon_q) << ','
          << FormatDouble(a.freshness) << ',' << FormatDouble(a.relevance_p) << ','
          << FormatDouble(a.relevance_q) << '\n';
    }
  }
}

void WriteMcaCsv(const Trace& trace, const std::filesystem::path& path) {
  auto out = OpenOut(path);
  WriteMcaCsv(trace, out);
  Finish(out, path);
}

void WritePacketCsv(const std::vector<PacketLogEntry>& log, std::ostream& out) {
  out << "step,t,src,dst,omega,mp_p,nq_q,stamp,dropped\n";
  for (const auto& e : log) {
    out << e.step << ',' << FormatDouble(e.t) << ',' << e.src << ',' << e.dst << ','
        << FormatDouble(e.psi.omega) << ',' << FormatDouble(e.psi.mp_p) << ','
        << FormatDouble(e.psi.nq_q) << ',' << FormatDouble(e.stamp) << ',' << (e.dropped ? 1 : 0)
        << '\n';
  }
}

void WritePacketCsv(const std::vector<PacketLogEntry>& log, const std::filesystem::path& path) {
  auto out = OpenOut(path);
  WritePacketCsv(log, out);
  Finish(out, path);
}

void WritePortraitCsv(const PhasePortrait& pp, std::ostream& out) {
  out << "x,y\n";
  for (const auto& p : pp.points) out << FormatDouble(p.x) << ',' << FormatDouble(p.y) << '\n';
}

RunSummary Summarize(const ScenarioConfig& cfg, const Trace& trace, const ConvergenceReport& r) {
  RunSummary s;
  s.scenario = cfg.name;
  s.mca_enabled = cfg.mca.enabled;
  s.seed = cfg.seed;
  s.report = r;
  s.trigger_count = trace.trigger_count;
  s.clock_skew_count = trace.clock_skew_count;
  s.packets = trace.packets;
  s.steps = static_cast<long>(trace.rows.size());
  if (trace.divergence) {
    s.divergence = "step " + std::to_string(trace.divergence->step) + ", agent " +
                   std::to_string(trace.divergence->agent) + ": " + trace.divergence->what;
  }
  return s;
}

std::string SummaryJson(const RunSummary& s) {
  ordered_json j;
  j["schema_version"] = kSummarySchemaVersion;
  j["scenario"] = s.scenario;
  j["mca_enabled"] = s.mca_enabled;
  j["seed"] = s.seed;
  j["converged"] = s.report.converged;
  j["conv_time"] = NumberOrNull(s.report.conv_time);
  j["diverged"] = s.report.diverged;
  j["trigger_count"] = s.trigger_count;
  j["final"] = {{"freq_error", NumberOrNull(s.report.freq_error_final)},
                {"p_share_spread", NumberOrNull(s.report.p_share_spread_final)},
                {"q_share_spread", NumberOrNull(s.report.q_share_spread_final)}};
  j["packets"] = {{"sent", s.packets.sent},
                  {"dropped", s.packets.dropped},
                  {"delivered", s.packets.delivered},
                  {"tsa_clamped", s.packets.tsa_clamped}};
  j["clock_skew_count"] = s.clock_skew_count;
  j["steps"] = s.steps;
  j["divergence"] = s.divergence.empty() ? ordered_json() : ordered_json(s.divergence);
  return j.dump(2) + "\n";
}

void WriteSummaryJson(const RunSummary& s, const std::filesystem::path& path) {
  auto out = OpenOut(path);
  out << SummaryJson(s);
  Finish(out, path);
}

RunSummary ParseSummaryJson(const std::string& text) {
  const auto j = ordered_json::parse(text);
  if (j.at("schema_version").get<int>() != kSummarySchemaVersion) {
    throw Error("unsupported summary schema_version");
  }
  RunSummary s;
  s.scenario = j.at("scenario").get<std::string>();
  s.mca_enabled = j.at("mca_enabled").get<bool>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.report.converged = j.at("converged").get<bool>();
  s.report.conv_time = NumberOrNan(j.at("conv_time"));
  s.report.diverged = j.at("diverged").get<bool>();
  s.trigger_count = j.at("trigger_count").get<long>();
  const auto& f = j.at("final");
  s.report.freq_error_final = NumberOrNan(f.at("freq_error"));
  s.report.p_share_spread_final = NumberOrNan(f.at("p_share_spread"));
  s.report.q_share_spread_final = NumberOrNan(f.at("q_share_spread"));
  const auto& p = j.at("packets");
  s.packets.sent = p.at("sent").get<long>();
  s.packets.dropped = p.at("dropped").get<long>();
  s.packets.delivered = p.at("delivered").get<long>();
  s.packets.tsa_clamped = p.at("tsa_clamped").get<long>();
  s.clock_skew_count = j.at("clock_skew_count").get<long>();
  s.steps = j.at("steps").get<long>();
  if (j.at("divergence").is_string()) s.divergence = j.at("divergence").get<std::string>();
  return s;
}

}  // namespace dersim
