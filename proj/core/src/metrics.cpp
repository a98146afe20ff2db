#include "dersim/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "dersim/error.hpp"

namespace dersim {
namespace {

struct Spread {
  double freq = 0.0;
  double p = 0.0;
  double q = 0.0;
};

double RelSpread(double lo, double hi, double sum, int n) {
  const double mean = std::abs(sum / n);
  if (hi - lo == 0.0) return 0.0;
  return mean > 0.0 ? (hi - lo) / mean : std::numeric_limits<double>::infinity();
}

Spread RowSpread(const TraceRow& row, double omega_nom) {
  Spread s;
  double plo = row.agents[0].mp_p, phi = plo, psum = 0.0;
  double qlo = row.agents[0].nq_q, qhi = qlo, qsum = 0.0;
  for (const auto& a : row.agents) {
    s.freq = std::max(s.freq, std::abs(a.omega - omega_nom));
    plo = std::min(plo, a.mp_p);
    phi = std::max(phi, a.mp_p);
    psum += a.mp_p;
    qlo = std::min(qlo, a.nq_q);
    qhi = std::max(qhi, a.nq_q);
    qsum += a.nq_q;
  }
  const int n = static_cast<int>(row.agents.size());
  s.p = RelSpread(plo, phi, psum, n);
  s.q = RelSpread(qlo, qhi, qsum, n);
  return s;
}

template <typename Ok>
ConvergenceReport FirstDwell(const Trace& trace, double from, double until, double dwell, Ok&& ok) {
  ConvergenceReport r;
  const double eps = 1e-9 * trace.dt;
  const long need = std::lround(dwell / trace.dt);
  long run_start = -1;
  for (long i = 0; i < static_cast<long>(trace.rows.size()); ++i) {
    const TraceRow& row = trace.rows[i];
    if (row.t < from - eps) continue;
    if (row.t > until + eps) break;
    if (!ok(row)) {
      run_start = -1;
      continue;
    }
    if (run_start < 0) run_start = i;
    if (i - run_start >= need) {
      r.converged = true;
      r.conv_time = trace.rows[run_start].t - from;
      break;
    }
  }
  return r;
}

}  // namespace

ConvergenceReport AssessConvergence(const Trace& trace, const MetricsSettings& m) {
  ConvergenceReport r;
  if (trace.divergence) {
    r.diverged = true;
    r.freq_error_final = r.p_share_spread_final = r.q_share_spread_final =
        std::numeric_limits<double>::infinity();
    return r;
  }
  if (trace.rows.empty() || trace.rows.back().t + 1e-9 * trace.dt < m.disturbance_t + m.dwell) {
    throw ContractError("trace ends before disturbance time + dwell");
  }
  r = FirstDwell(trace, m.disturbance_t, m.disturbance_t + m.horizon, m.dwell,
                 [&](const TraceRow& row) {
                   const Spread s = RowSpread(row, trace.omega_nom);
                   return s.freq <= m.tol_freq && s.p <= m.tol_share && s.q <= m.tol_share;
                 });
  const Spread fin = RowSpread(trace.rows.back(), trace.omega_nom);
  r.freq_error_final = fin.freq;
  r.p_share_spread_final = fin.p;
  r.q_share_spread_final = fin.q;
  return r;
}

ConvergenceReport AssessConsensus(const Trace& trace, const ConsensusSettings& s) {
  ConvergenceReport r;
  if (trace.divergence) {
    r.diverged = true;
    return r;
  }
  if (trace.rows.empty()) throw ContractError("empty trace");
  auto spreads = [](const TraceRow& row) {
    std::array<double, 3> lo{row.agents[0].omega, row.agents[0].mp_p, row.agents[0].nq_q};
    std::array<double, 3> hi = lo;
    for (const auto& a : row.agents) {
      const std::array<double, 3> v{a.omega, a.mp_p, a.nq_q};
      for (int c = 0; c < 3; ++c) {
        lo[c] = std::min(lo[c], v[c]);
        hi[c] = std::max(hi[c], v[c]);
      }
    }
    return std::array<double, 3>{hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]};
  };
  const auto initial = spreads(trace.rows.front());
  r = FirstDwell(trace, trace.rows.front().t, trace.rows.back().t, s.dwell,
                 [&](const TraceRow& row) {
                   const auto sp = spreads(row);
                   for (int c = 0; c < 3; ++c)
                     if (!(sp[c] <= s.tol * initial[c])) return false;
                   return true;
                 });
  const auto fin = spreads(trace.rows.back());
  r.freq_error_final = fin[0];
  r.p_share_spread_final = fin[1];
  r.q_share_spread_final = fin[2];
  return r;
}

PhasePortrait ExtractPhasePortrait(const Trace& trace, int agent, long stride) {
  if (agent < 0 || agent >= trace.n_agents) throw ContractError("no such agent in trace");
  if (stride < 1) throw ContractError("stride must be >= 1");
  PhasePortrait pp;
  pp.agent = agent;
  pp.stride = stride;
  const long count = static_cast<long>(trace.rows.size()) / stride;
  pp.points.reserve(static_cast<std::size_t>(count));
  for (long k = 0; k < count; ++k) {
    const auto& a = trace.rows[k * stride].agents[agent];
    pp.points.push_back({a.mp_p, a.nq_q});
  }
  return pp;
}

}  // namespace dersim
