#pragma once

#include <utility>
#include <vector>

#include "dersim/cyber_graph.hpp"
#include "dersim/plant.hpp"

namespace dersim {

// Consensus state exchanged between neighbours: [omega, m_p P, n_q Q].
struct Psi {
  double omega = 0.0;
  double mp_p = 0.0;
  double nq_q = 0.0;

  bool operator==(const Psi&) const = default;
};

inline Psi operator+(const Psi& a, const Psi& b) {
  return {a.omega + b.omega, a.mp_p + b.mp_p, a.nq_q + b.nq_q};
}

struct ScParams {
  double c = 1.0;           // convergence parameter
  double kp_omega = 0.1;    // H1
  double ki_omega = 100.0;
  double kp_v = 0.1;        // H2
  double ki_v = 10.0;
};

// Local consensus input: p is the frequency/active channel, q the reactive one.
struct Zeta {
  double p = 0.0;
  double q = 0.0;

  bool operator==(const Zeta&) const = default;
};

Psi PackPsi(const DerState& s, double omega_j, const DroopParams& dp);

struct NeighborPsi {
  int agent = 0;
  Psi psi;
};

// zeta_p = c sum_m e_jm [(omega_m - omega_j) + (mpP_m - mpP_j)]
// zeta_q = c sum_m e_jm (nqQ_m - nqQ_j)
// Neighbours absent from `received` contribute nothing. Throws ContractError
// for entries from non-neighbours or duplicated neighbours.
Zeta ConsensusInput(const Psi& own, const std::vector<NeighborPsi>& received,
                    const CyberGraph& g, int j, double c);

struct PiOutput {
  double correction = 0.0;
  double integrator = 0.0;
};

// H1 on u = (omega_nom - omega_j) + zeta_p. Positive u raises the frequency
// correction; forward-Euler integrator.
PiOutput FrequencyCorrection(double zeta_p, double omega_j, double omega_nom,
                             const ScParams& params, double dt, double integ);

// H2 on u = zeta_q.
PiOutput VoltageCorrection(double zeta_q, const ScParams& params, double dt, double integ);

}  // namespace dersim
