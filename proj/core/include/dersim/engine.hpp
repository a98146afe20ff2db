#pragma once

#include <vector>

#include "dersim/scenario.hpp"
#include "dersim/trace.hpp"

namespace dersim {

// Runs the scenario to t_end. Non-finite state stops the run early and is
// reported in Trace::divergence rather than thrown.
Trace Simulate(const ScenarioConfig& cfg);

// Simulate, but a divergence raises DivergenceError.
Trace RunScenario(const ScenarioConfig& cfg);

// Pure delayed consensus psi' = -L psi(t - tau) on each channel, no plant.
Trace RunAbstractConsensus(const ScenarioConfig& cfg);

struct DelaySweepPoint {
  double tau = 0.0;
  bool converged = false;
  double conv_time = 0.0;
  bool diverged = false;
};

// One run per tau. Abstract scenarios vary abstract.tau; plant scenarios get
// a latency attack of tau on every link from metrics.disturbance_t.
std::vector<DelaySweepPoint> SweepDelay(const ScenarioConfig& cfg, const std::vector<double>& taus);

}  // namespace dersim
