#pragma once

#include <limits>
#include <vector>

#include "dersim/scenario.hpp"
#include "dersim/trace.hpp"

namespace dersim {

struct ConvergenceReport {
  bool converged = false;
  double conv_time = std::numeric_limits<double>::quiet_NaN();  // since the disturbance
  double freq_error_final = 0.0;      // max_j |omega_j - omega_nom|, rad/s
  double p_share_spread_final = 0.0;  // (max - min) / |mean| of m_p P
  double q_share_spread_final = 0.0;  // same for n_q Q
  bool diverged = false;
};

// First t* >= disturbance_t such that the objectives hold on every row of
// [t*, t* + dwell] and t* + dwell lies inside the trace and the horizon.
// Throws ContractError if the trace ends before disturbance_t + dwell.
ConvergenceReport AssessConvergence(const Trace& trace, const MetricsSettings& m);

struct ConsensusSettings {
  double tol = 1e-2;  // spread relative to the spread at the first row
  double dwell = 0.5;
};

// Abstract-mode classifier: converged once the spread of each of omega,
// m_p P and n_q Q stays below tol times its initial spread for a full dwell.
ConvergenceReport AssessConsensus(const Trace& trace, const ConsensusSettings& s = {});

struct PhasePoint {
  double x = 0.0;  // m_p P
  double y = 0.0;  // n_q Q
  bool operator==(const PhasePoint&) const = default;
};

struct PhasePortrait {
  int agent = 0;
  long stride = 1;
  std::vector<PhasePoint> points;
};

PhasePortrait ExtractPhasePortrait(const Trace& trace, int agent, long stride);

}  // namespace dersim
