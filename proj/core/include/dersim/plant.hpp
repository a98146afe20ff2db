#pragma once

#include <numbers>
#include <vector>

#include "dersim/types.hpp"

namespace dersim {

struct DroopParams {
  double m_p = 9.4e-5;                       // rad/(W s)
  double n_q = 1.3e-3;                       // V/VAr
  double omega_nom = 2.0 * std::numbers::pi * 60.0;  // rad/s
  double v_nom = 310.0;                      // V
};

// Inner-loop gains. The current-loop gains are carried for completeness;
// the reduced-order plant folds the current loop into the voltage lag.
struct InnerLoopParams {
  double kp_v = 50.0;
  double ki_v = 100.0;
  double kp_i = 0.2;
  double ki_i = 1.0;
  double omega_c = 31.4;  // rad/s, power measurement low-pass cutoff

  double voltage_time_constant() const { return kp_v / ki_v; }
};

struct DerState {
  double theta = 0.0;  // rad, relative to the nominal rotating frame
  double v_d = 310.0;
  double v_q = 0.0;
  double p_filt = 0.0;
  double q_filt = 0.0;
  Vec2 vc_error{0.0, 0.0};
  Vec2 sc_integrators{0.0, 0.0};  // [frequency PI, voltage PI]
};

struct BusLoad {
  struct Step {
    double t = 0.0;
    double p = 0.0;
    double q = 0.0;
  };
  double p = 0.0;  // W
  double q = 0.0;  // VAr
  std::vector<Step> steps;  // sorted by t; each replaces (p, q) from t on

  // Load in force at time t (steps are inclusive at their instant).
  std::pair<double, double> At(double t) const;
};

struct ElectricalNetwork {
  SquareMatrix susceptance;  // S; symmetric, zero diagonal, non-negative
  std::vector<BusLoad> loads;

  int n_buses() const { return static_cast<int>(susceptance.size()); }
  // Throws ConfigError naming the offending entry.
  void Validate() const;
};

struct PowerFlow {
  double p = 0.0;
  double q = 0.0;
  double p_load = 0.0;
  double q_load = 0.0;
};

struct DroopReference {
  double omega_star = 0.0;
  Vec2 v_star{0.0, 0.0};
};

DroopReference DroopReferences(const DerState& s, const DroopParams& dp, double d_omega,
                               double d_v);

struct VcStep {
  double v_d = 0.0;
  double v_q = 0.0;
  Vec2 vc_error{0.0, 0.0};  // reference minus voltage, before the update
};

// First-order voltage lag with time constant kp_v / ki_v.
VcStep VcLoopStep(const DerState& s, const Vec2& v_star, const InnerLoopParams& ilp, double dt);

std::vector<PowerFlow> NetworkPowers(const std::vector<DerState>& states,
                                     const ElectricalNetwork& net, double t);

// Explicit low-pass update; ConfigError when dt * omega_c >= 1.
double MeasureFilter(double raw, double filt_prev, double omega_c, double dt);

struct PlantModel {
  DroopParams droop;
  InnerLoopParams inner;
  ElectricalNetwork network;
};

struct PlantStep {
  std::vector<DerState> states;
  std::vector<double> omegas;
  std::vector<PowerFlow> powers;
};

// Advances every DER one step: frequency follows its droop reference,
// angles integrate the deviation from nominal, the voltage lag and the
// measurement filters advance, and powers are evaluated at t_next.
PlantStep IntegratePlant(const std::vector<DerState>& states,
                         const std::vector<DroopReference>& refs, const PlantModel& model,
                         double dt, double t_next);

}  // namespace dersim
